// Command-line driver. Experiments are described by JSON config files; flags
// exist only to override individual config entries for quick exploration.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thermo/config.hpp"
#include "thermo/runner.hpp"

namespace {

struct Overrides {
    std::optional<int> depth, cells, max_period, grid, n_max, max_word_len, time_budget;
    std::optional<double> x0, center, rho;
    std::optional<std::string> output, format;
};

void add_common(CLI::App* sub, std::string& config_path, Overrides& ov) {
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--depth", ov.depth, "override: tree depth");
    sub->add_option("--cells", ov.cells, "override: collocation cells");
    sub->add_option("--max-period", ov.max_period, "override: periodic-orbit search period");
    sub->add_option("--grid", ov.grid, "override: Birkhoff sampling grid");
    sub->add_option("--n-max", ov.n_max, "override: deepest pull-back level");
    sub->add_option("--max-word-len", ov.max_word_len, "override: freeness word length");
    sub->add_option("--time-budget", ov.time_budget, "override: freeness time budget");
    sub->add_option("--x0", ov.x0, "override: base point");
    sub->add_option("--center", ov.center, "override: ball center");
    sub->add_option("--rho", ov.rho, "override: ball radius");
    sub->add_option("--output", ov.output, "override: output path (default stdout)");
    sub->add_option("--format", ov.format, "override: csv or json");
}

nlohmann::json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw thermo::ConfigError({"cannot read config file: " + path});
    std::stringstream ss;
    ss << f.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw thermo::ConfigError({std::string("malformed JSON: ") + e.what()});
    }
    return j;
}

void apply_overrides(nlohmann::json& j, const Overrides& ov) {
    if (ov.depth) j["depth"] = *ov.depth;
    if (ov.cells) j["cells"] = *ov.cells;
    if (ov.max_period) j["max_period"] = *ov.max_period;
    if (ov.grid) j["grid"] = *ov.grid;
    if (ov.n_max) j["n_max"] = *ov.n_max;
    if (ov.max_word_len) j["max_word_len"] = *ov.max_word_len;
    if (ov.time_budget) j["time_budget"] = *ov.time_budget;
    if (ov.x0) j["x0"] = *ov.x0;
    if (ov.center) j["center"] = *ov.center;
    if (ov.rho) j["rho"] = *ov.rho;
    if (ov.output) j["output"] = *ov.output;
    if (ov.format) j["format"] = *ov.format;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermodynamic-formalism experiments on piecewise-monotone interval maps"};
    app.require_subcommand(1);

    const char* commands[] = {"pressure-tree", "pressure-ulam", "hyperbolicity",
                              "scan",          "shrinking",     "distortion",
                              "imfs",          "lyapunov",      "mixing"};
    std::string config_path;
    Overrides ov;
    std::string chosen;
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub, config_path, ov);
        sub->callback([&chosen, name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json j = load_config(config_path);
        j["command"] = chosen; // the subcommand wins over the config's command field
        apply_overrides(j, ov);
        thermo::ExperimentConfig cfg = thermo::parse_config(j);
        return thermo::run_experiment(cfg, std::cout, std::cerr);
    } catch (const thermo::ConfigError& e) {
        std::cerr << "{\"schema\":\"1\",\"error\":\"config\",\"message\":\"invalid config\","
                  << "\"details\":[";
        for (size_t i = 0; i < e.errors.size(); ++i) {
            if (i) std::cerr << ',';
            std::cerr << nlohmann::json(e.errors[i]).dump();
        }
        std::cerr << "]}\n";
        return thermo::kExitPrecondition;
    }
}
