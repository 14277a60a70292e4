#include "thermo/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "thermo/errors.hpp"

namespace thermo {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands = {"pressure-tree", "pressure-ulam", "hyperbolicity",
                                         "scan",          "shrinking",     "distortion",
                                         "imfs",          "lyapunov",      "mixing"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                std::vector<std::string>& errors) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            errors.push_back("unknown key '" + it.key() + "' in " + where);
}

void validate_map_spec(const json& spec, std::vector<std::string>& errors) {
    if (!spec.is_object() || !spec.contains("kind")) {
        errors.push_back("map spec must be an object with a 'kind'");
        return;
    }
    std::string kind = spec["kind"];
    if (kind == "intermittent") {
        check_keys(spec, {"kind", "alpha"}, "map", errors);
        if (!spec.contains("alpha") || !spec["alpha"].is_number())
            errors.push_back("intermittent map needs numeric 'alpha'");
        else if (double a = spec["alpha"]; !(a > 0.0 && a < 1.0))
            errors.push_back("alpha outside (0,1)");
    } else if (kind == "doubling" || kind == "tent" || kind == "logistic" ||
               kind == "chebyshev-like") {
        check_keys(spec, {"kind"}, "map", errors);
    } else if (kind == "piecewise") {
        check_keys(spec, {"kind", "ambient", "branches"}, "map", errors);
        if (!spec.contains("ambient") || !spec["ambient"].is_array() ||
            spec["ambient"].size() != 2)
            errors.push_back("piecewise map needs 'ambient':[lo,hi]");
        if (!spec.contains("branches") || !spec["branches"].is_array() ||
            spec["branches"].empty())
            errors.push_back("piecewise map needs a non-empty 'branches' array");
        else
            for (const auto& b : spec["branches"]) {
                check_keys(b, {"domain", "expr"}, "piecewise branch", errors);
                if (!b.contains("domain") || !b.contains("expr"))
                    errors.push_back("piecewise branch needs 'domain' and 'expr'");
            }
    } else {
        errors.push_back("unknown map kind '" + kind + "'");
    }
}

void validate_potential_spec(const json& spec, std::vector<std::string>& errors,
                             const std::string& where = "potential") {
    if (!spec.is_object() || !spec.contains("kind")) {
        errors.push_back(where + " spec must be an object with a 'kind'");
        return;
    }
    std::string kind = spec["kind"];
    if (kind == "constant") {
        check_keys(spec, {"kind", "c"}, where, errors);
        if (!spec.contains("c")) errors.push_back(where + ": constant needs 'c'");
    } else if (kind == "cosine") {
        check_keys(spec, {"kind", "amp", "freq"}, where, errors);
        if (!spec.contains("amp") || !spec.contains("freq"))
            errors.push_back(where + ": cosine needs 'amp' and 'freq'");
    } else if (kind == "geometric") {
        check_keys(spec, {"kind", "t", "alpha"}, where, errors);
        if (!spec.contains("t")) errors.push_back(where + ": geometric needs 't'");
    } else if (kind == "distance_power") {
        check_keys(spec, {"kind", "C", "alpha", "points"}, where, errors);
        if (!spec.contains("alpha"))
            errors.push_back(where + ": distance_power needs mandatory 'alpha'");
        if (!spec.contains("C") || !spec.contains("points"))
            errors.push_back(where + ": distance_power needs 'C' and 'points'");
    } else if (kind == "expr") {
        check_keys(spec, {"kind", "expr", "alpha"}, where, errors);
        if (!spec.contains("alpha")) errors.push_back(where + ": expr needs mandatory 'alpha'");
        if (!spec.contains("expr")) errors.push_back(where + ": expr needs 'expr'");
    } else {
        errors.push_back(where + ": unknown potential kind '" + kind + "'");
    }
}

} // namespace

IntervalMap map_from_spec(const json& spec) {
    std::string kind = spec.at("kind");
    if (kind == "intermittent") return make_intermittent(spec.at("alpha"));
    if (kind == "piecewise") {
        std::vector<ExprBranchSpec> branches;
        for (const auto& b : spec.at("branches"))
            branches.push_back(
                ExprBranchSpec{b.at("domain")[0], b.at("domain")[1], b.at("expr")});
        return make_piecewise(spec.at("ambient")[0], spec.at("ambient")[1], branches);
    }
    return make_builtin(kind);
}

Potential potential_from_spec(const json& spec, const IntervalMap& map) {
    std::string kind = spec.at("kind");
    if (kind == "constant") return make_constant(spec.at("c"));
    if (kind == "cosine") return make_cosine(spec.at("amp"), spec.at("freq"));
    if (kind == "geometric")
        return make_geometric(map, spec.at("t"), spec.value("alpha", 1.0));
    if (kind == "distance_power")
        return make_distance_power(spec.at("C"), spec.at("alpha"),
                                   spec.at("points").get<std::vector<double>>());
    return make_expr_potential(spec.at("expr"), spec.at("alpha"));
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("malformed JSON: ") + e.what()});
    }
    return parse_config(j);
}

ExperimentConfig parse_config(const json& j) {
    std::vector<std::string> errors;
    if (!j.is_object()) throw ConfigError({"config must be a JSON object"});

    ExperimentConfig cfg;
    cfg.command = j.value("command", "");
    if (!kCommands.count(cfg.command))
        errors.push_back("unknown or missing command '" + cfg.command + "'");

    const std::set<std::string> common = {"command", "map",    "potential", "output",
                                          "format",  "budget", "max_iterations"};
    std::set<std::string> allowed = common;
    auto extend = [&](std::initializer_list<std::string> keys) {
        for (const auto& k : keys) allowed.insert(k);
    };
    if (cfg.command == "pressure-tree") extend({"depth", "x0"});
    if (cfg.command == "pressure-ulam") extend({"cells"});
    if (cfg.command == "hyperbolicity") extend({"depth", "cells", "max_period", "grid"});
    if (cfg.command == "scan") extend({"psi", "t_grid", "cells"});
    if (cfg.command == "shrinking") extend({"center", "rho", "n_max"});
    if (cfg.command == "distortion")
        extend({"center", "rho", "n_max", "c_star", "c0", "alpha", "beta"});
    if (cfg.command == "imfs")
        extend({"b0", "times", "elements", "x0", "max_word_len", "time_budget",
                "target_integral", "D"});
    if (cfg.command == "lyapunov") extend({"max_period", "cells"});
    if (cfg.command == "mixing") extend({"cells", "n_max", "psi", "psi2"});
    check_keys(j, allowed, "config", errors);

    bool needs_map = true;
    bool needs_potential =
        cfg.command != "shrinking" && cfg.command != "lyapunov" && cfg.command != "distortion";
    if (needs_map) {
        if (!j.contains("map"))
            errors.push_back("missing 'map'");
        else {
            validate_map_spec(j["map"], errors);
            cfg.map_spec = j["map"];
        }
    }
    if (j.contains("potential")) {
        validate_potential_spec(j["potential"], errors);
        cfg.potential_spec = j["potential"];
    } else if (needs_potential) {
        errors.push_back("missing 'potential'");
    }

    auto get_int = [&](const char* key, int& out, int min, const char* msg) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) {
            errors.push_back(std::string(key) + " must be an integer");
            return;
        }
        out = j[key];
        if (out < min) errors.push_back(std::string(key) + " " + msg);
    };
    get_int("depth", cfg.depth, cfg.command == "pressure-tree" ? 4 : 1,
            cfg.command == "pressure-tree" ? ">= 4 required" : ">= 1 required");
    get_int("cells", cfg.cells, 16, ">= 16 required");
    get_int("max_period", cfg.max_period, 1, ">= 1 required");
    get_int("grid", cfg.grid, 2, ">= 2 required");
    get_int("n_max", cfg.n_max, cfg.command == "shrinking" ? 6 : 1,
            cfg.command == "shrinking" ? ">= 6 required" : ">= 1 required");
    get_int("max_word_len", cfg.max_word_len, 1, ">= 1 required");
    get_int("time_budget", cfg.time_budget, 1, ">= 1 required");
    if (j.contains("max_iterations")) cfg.max_iterations = j["max_iterations"];
    if (j.contains("budget")) cfg.budget = j["budget"];
    if (j.contains("x0")) cfg.x0 = j["x0"];
    if (j.contains("center")) cfg.center = j["center"];
    if (j.contains("rho")) {
        cfg.rho = j["rho"];
        if (!(cfg.rho > 0.0)) errors.push_back("rho must be positive");
    }
    if (j.contains("b0")) {
        if (!j["b0"].is_array() || j["b0"].size() != 2) {
            errors.push_back("b0 must be [lo,hi]");
        } else {
            cfg.b0_lo = j["b0"][0];
            cfg.b0_hi = j["b0"][1];
            if (!(cfg.b0_lo < cfg.b0_hi)) errors.push_back("b0 must satisfy lo < hi");
        }
    }
    if (j.contains("times")) {
        cfg.times = j["times"].get<std::vector<int>>();
        if (cfg.times.empty()) errors.push_back("times must be non-empty");
        for (size_t i = 1; i < cfg.times.size(); ++i)
            if (cfg.times[i] <= cfg.times[i - 1])
                errors.push_back("times must be strictly increasing");
    }
    if (j.contains("elements")) {
        if (!j["elements"].is_array() || j["elements"].empty()) {
            errors.push_back("elements must be a non-empty array");
        } else {
            for (const auto& e : j["elements"]) {
                check_keys(e, {"time", "interval"}, "imfs element", errors);
                if (!e.contains("time") || !e.contains("interval") ||
                    !e["interval"].is_array() || e["interval"].size() != 2) {
                    errors.push_back("imfs element needs 'time' and 'interval':[lo,hi]");
                    continue;
                }
                cfg.elements.push_back({e["time"], e["interval"][0], e["interval"][1]});
            }
        }
    }
    if (cfg.command == "imfs" && !j.contains("times") && !j.contains("elements"))
        errors.push_back("imfs needs 'times' or 'elements'");
    if (cfg.command == "scan") {
        if (!j.contains("psi")) {
            errors.push_back("scan needs 'psi'");
        } else {
            validate_potential_spec(j["psi"], errors, "psi");
            cfg.psi_spec = j["psi"];
        }
        if (!j.contains("t_grid") || !j["t_grid"].is_array()) {
            errors.push_back("scan needs 't_grid' array");
        } else {
            cfg.t_grid = j["t_grid"].get<std::vector<double>>();
            if (cfg.t_grid.size() < 5) errors.push_back("t_grid: >= 5 points required");
            if (!std::is_sorted(cfg.t_grid.begin(), cfg.t_grid.end()))
                errors.push_back("t_grid must be sorted");
        }
    }
    if (cfg.command == "mixing") {
        if (j.contains("psi")) {
            validate_potential_spec(j["psi"], errors, "psi");
            cfg.psi_spec = j["psi"];
        }
        if (j.contains("psi2")) {
            validate_potential_spec(j["psi2"], errors, "psi2");
            cfg.psi2_spec = j["psi2"];
        }
    }
    if (cfg.command == "distortion") {
        for (const char* key : {"c_star", "c0", "alpha", "beta"})
            if (j.contains(key)) {
                double v = j[key];
                if (key == std::string("c_star")) cfg.c_star = v;
                if (key == std::string("c0")) cfg.c0 = v;
                if (key == std::string("alpha")) cfg.alpha = v;
                if (key == std::string("beta")) cfg.beta = v;
            }
    }
    if (j.contains("target_integral")) cfg.target_integral = double(j["target_integral"]);
    if (j.contains("D")) {
        cfg.slack_d = double(j["D"]);
        if (*cfg.slack_d < 0.0) errors.push_back("D must be >= 0");
    }
    if (j.contains("output")) cfg.output_path = j["output"];
    if (j.contains("format")) {
        cfg.format = j["format"];
        if (cfg.format != "csv" && cfg.format != "json")
            errors.push_back("format must be 'csv' or 'json'");
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

} // namespace thermo
