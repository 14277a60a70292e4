#include "thermo/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "thermo/backward_tree.hpp"
#include "thermo/errors.hpp"
#include "thermo/imfs.hpp"
#include "thermo/pullback.hpp"
#include "thermo/thermo_analysis.hpp"
#include "thermo/transfer_operator.hpp"

namespace thermo {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string double_array(const std::vector<double>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out + "]";
}

std::string int_array(const std::vector<int>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out + "]";
}

// Accumulates "key":value pairs; keeps insertion order so output is stable.
struct JsonObject {
    std::string body;
    void raw(const std::string& key, const std::string& value) {
        if (!body.empty()) body += ',';
        body += quote(key) + ":" + value;
    }
    void num(const std::string& key, double v) { raw(key, format_double(v)); }
    void integer(const std::string& key, long v) { raw(key, std::to_string(v)); }
    void str(const std::string& key, const std::string& v) { raw(key, quote(v)); }
    void boolean(const std::string& key, bool v) { raw(key, v ? "true" : "false"); }
    std::string str_value() const { return "{" + body + "}"; }
};

std::string resolve_format(const ExperimentConfig& cfg) {
    if (!cfg.format.empty()) return cfg.format;
    if (cfg.command == "pressure-tree" || cfg.command == "scan" || cfg.command == "shrinking")
        return "csv";
    return "json";
}

double resolve_x0(const ExperimentConfig& cfg, const IntervalMap& map) {
    if (std::isnan(cfg.x0)) return map.ambient_lo() + 0.5 * (map.ambient_hi() - map.ambient_lo());
    return cfg.x0;
}

std::string run_pressure_tree(const ExperimentConfig& cfg, const std::string& format) {
    IntervalMap map = map_from_spec(cfg.map_spec);
    Potential phi = potential_from_spec(cfg.potential_spec, map);
    std::size_t budget = cfg.budget ? cfg.budget : kDefaultNodeBudget;
    BackwardTree tree =
        build_tree(map, phi, resolve_x0(cfg, map), cfg.depth, Exec::Parallel, budget);
    PressureEstimate est = tree_pressure(tree);

    if (format == "csv") {
        std::string out = "level,log_Z,leaf_count\n";
        for (int k = 1; k <= tree.depth; ++k)
            out += std::to_string(k) + "," + format_double(tree.log_partition[k - 1]) + "," +
                   std::to_string(tree.level_counts[k - 1]) + "\n";
        return out;
    }
    JsonObject j;
    j.str("schema", "1");
    j.str("command", "pressure-tree");
    j.num("pressure", est.value);
    j.str("method", est.method);
    j.integer("depth", tree.depth);
    j.num("base", tree.base);
    j.raw("log_Z", double_array(tree.log_partition));
    return j.str_value() + "\n";
}

std::string run_pressure_ulam(const ExperimentConfig& cfg, const std::string& format) {
    IntervalMap map = map_from_spec(cfg.map_spec);
    Potential phi = potential_from_spec(cfg.potential_spec, map);
    PressureEstimate est =
        pressure_operator(map, phi, cfg.cells, Exec::Parallel, cfg.max_iterations);

    if (format == "csv")
        return "cells,pressure,residual\n" + std::to_string(cfg.cells) + "," +
               format_double(est.value) + "," + format_double(est.residual) + "\n";
    JsonObject j;
    j.str("schema", "1");
    j.str("command", "pressure-ulam");
    j.num("pressure", est.value);
    j.str("method", est.method);
    j.integer("cells", cfg.cells);
    j.num("residual", est.residual);
    j.raw("trace", double_array(est.trace));
    return j.str_value() + "\n";
}

std::string run_hyperbolicity(const ExperimentConfig& cfg, const std::string& format) {
    IntervalMap map = map_from_spec(cfg.map_spec);
    Potential phi = potential_from_spec(cfg.potential_spec, map);
    HyperbolicityReport rep =
        hyperbolicity_check(map, phi, cfg.depth, cfg.cells, cfg.max_period, cfg.grid);

    if (format == "csv")
        return "key,value\nsup_birkhoff," + format_double(rep.sup_birkhoff) + "\npressure," +
               format_double(rep.pressure.value) + "\nmargin," + format_double(rep.margin) +
               "\nverdict," + rep.verdict + "\n";
    JsonObject j;
    j.str("schema", "1");
    j.str("command", "hyperbolicity");
    j.num("sup_birkhoff", rep.sup_birkhoff);
    j.num("pressure", rep.pressure.value);
    j.num("margin", rep.margin);
    j.str("verdict", rep.verdict);
    j.raw("witnesses", double_array(rep.witness_orbit));
    j.num("witness_value", rep.witness_value);
    j.num("tree_estimate", rep.tree_estimate.value);
    return j.str_value() + "\n";
}

std::string run_scan(const ExperimentConfig& cfg, const std::string& format) {
    IntervalMap map = map_from_spec(cfg.map_spec);
    Potential phi = potential_from_spec(cfg.potential_spec, map);
    Potential psi = potential_from_spec(cfg.psi_spec, map);
    PressureCurve curve =
        pressure_scan(map, phi, psi, cfg.t_grid, cfg.cells, Exec::Parallel, cfg.max_iterations);
    std::vector<Kink> kinks = kink_detect(curve);

    if (format == "csv") {
        std::string out = "t,P,dP,d2P\n";
        for (size_t i = 0; i < curve.t.size(); ++i)
            out += format_double(curve.t[i]) + "," + format_double(curve.P[i]) + "," +
                   format_double(curve.dP[i]) + "," + format_double(curve.d2P[i]) + "\n";
        return out;
    }
    JsonObject j;
    j.str("schema", "1");
    j.str("command", "scan");
    j.raw("t", double_array(curve.t));
    j.raw("P", double_array(curve.P));
    j.raw("dP", double_array(curve.dP));
    j.raw("d2P", double_array(curve.d2P));
    std::string karr = "[";
    for (size_t i = 0; i < kinks.size(); ++i) {
        if (i) karr += ',';
        JsonObject k;
        k.num("t", kinks[i].t);
        k.num("left_slope", kinks[i].left_slope);
        k.num("right_slope", kinks[i].right_slope);
        karr += k.str_value();
    }
    j.raw("kinks", karr + "]");
    return j.str_value() + "\n";
}

std::string run_shrinking(const ExperimentConfig& cfg, const std::string& format) {
    IntervalMap map = map_from_spec(cfg.map_spec);
    std::size_t budget = cfg.budget ? cfg.budget : kDefaultComponentBudget;
    ShrinkingFit fit =
        shrinking_fit(map, cfg.center, cfg.rho, cfg.n_max, Exec::Parallel, budget);

    if (format == "csv") {
        std::string out = "n,max_diam\n";
        for (size_t i = 0; i < fit.max_diams.size(); ++i)
            out += std::to_string(i + 1) + "," + format_double(fit.max_diams[i]) + "\n";
        return out;
    }
    JsonObject j;
    j.str("schema", "1");
    j.str("command", "shrinking");
    j.num("beta_hat", fit.beta_hat);
    j.num("c_hat", fit.c_hat);
    j.boolean("super_polynomial", fit.super_polynomial);
    j.raw("max_diams", double_array(fit.max_diams));
    return j.str_value() + "\n";
}

std::string run_distortion(const ExperimentConfig& cfg, const std::string&) {
    JsonObject j;
    j.str("schema", "1");
    j.str("command", "distortion");
    if (cfg.c_star && cfg.c0 && cfg.alpha && cfg.beta)
        j.num("constant", distortion_constant(*cfg.c_star, *cfg.c0, *cfg.alpha, *cfg.beta));
    if (!cfg.map_spec.is_null() && !cfg.potential_spec.is_null()) {
        IntervalMap map = map_from_spec(cfg.map_spec);
        Potential phi = potential_from_spec(cfg.potential_spec, map);
        j.num("empirical", empirical_distortion(map, phi, cfg.center, cfg.rho, cfg.n_max));
    }
    return j.str_value() + "\n";
}

std::string run_imfs(const ExperimentConfig& cfg, const std::string&) {
    IntervalMap map = map_from_spec(cfg.map_spec);
    Potential phi = potential_from_spec(cfg.potential_spec, map);
    ImfsBuildResult built;
    if (!cfg.elements.empty()) {
        for (const auto& spec : cfg.elements) {
            std::vector<PullBack> pbs = interval_pullbacks(map, cfg.b0_lo, cfg.b0_hi, spec.time);
            const PullBack* chosen = nullptr;
            for (const PullBack& pb : pbs)
                if (std::abs(pb.lo - spec.lo) <= 1e-8 && std::abs(pb.hi - spec.hi) <= 1e-8)
                    chosen = &pb;
            if (!chosen)
                throw InfeasibleError("no level-" + std::to_string(spec.time) +
                                      " pull-back matches the requested element interval");
            built.elements.push_back(
                make_imfs_element(map, phi, cfg.b0_lo, cfg.b0_hi, *chosen));
        }
    } else {
        built = build_imfs(map, phi, cfg.b0_lo, cfg.b0_hi, cfg.times);
    }
    double x0 = resolve_x0(cfg, map);
    FreenessResult freeness =
        imfs_freeness_check(map, built.elements, x0, cfg.max_word_len, cfg.time_budget);

    double target = cfg.target_integral ? *cfg.target_integral : 0.0;
    double slack = cfg.slack_d ? *cfg.slack_d : imfs_slack(built.elements, target);
    double bound = imfs_pressure_lower_bound(built.elements, target, slack);

    JsonObject j;
    j.str("schema", "1");
    j.str("command", "imfs");
    std::string earr = "[";
    for (size_t i = 0; i < built.elements.size(); ++i) {
        if (i) earr += ',';
        const ImfsElement& el = built.elements[i];
        JsonObject e;
        e.integer("time", el.time);
        e.num("lo", el.pullback.lo);
        e.num("hi", el.pullback.hi);
        e.raw("word", int_array(el.pullback.word));
        e.num("birkhoff_min", el.birkhoff_min);
        earr += e.str_value();
    }
    j.raw("elements", earr + "]");
    j.boolean("free", freeness.free);
    if (!freeness.free) {
        j.raw("witness_a", int_array(freeness.witness_a));
        j.raw("witness_b", int_array(freeness.witness_b));
    }
    j.num("target_integral", target);
    j.num("D", slack);
    j.num("pressure_lower_bound", bound);
    std::string warr = "[";
    for (size_t i = 0; i < built.warnings.size(); ++i) {
        if (i) warr += ',';
        warr += quote(built.warnings[i]);
    }
    j.raw("warnings", warr + "]");
    return j.str_value() + "\n";
}

std::string run_lyapunov(const ExperimentConfig& cfg, const std::string&) {
    IntervalMap map = map_from_spec(cfg.map_spec);
    LyapunovBounds b = lyapunov_bounds(map, cfg.max_period, cfg.cells);
    JsonObject j;
    j.str("schema", "1");
    j.str("command", "lyapunov");
    j.num("chi_inf", b.chi_inf);
    j.num("chi_sup", b.chi_sup);
    j.num("equilibrium_integral", b.equilibrium_integral);
    return j.str_value() + "\n";
}

std::string run_mixing(const ExperimentConfig& cfg, const std::string&) {
    IntervalMap map = map_from_spec(cfg.map_spec);
    Potential phi = potential_from_spec(cfg.potential_spec, map);
    CollocationOperator op = build_operator(map, phi, cfg.cells);
    EigenData eig = leading_eigen(op, cfg.max_iterations);
    MixingEstimate mix = mixing_rate(op, eig);

    JsonObject j;
    j.str("schema", "1");
    j.str("command", "mixing");
    j.num("pressure", std::log(eig.lambda));
    j.num("rho", mix.rho);
    j.boolean("low_confidence", mix.low_confidence);
    if (!cfg.psi_spec.is_null() && !cfg.psi2_spec.is_null()) {
        Potential psi1 = potential_from_spec(cfg.psi_spec, map);
        Potential psi2 = potential_from_spec(cfg.psi2_spec, map);
        std::vector<double> w = equilibrium_measure(op, eig);
        std::vector<double> corr = correlation_sum(map, op, psi1, psi2, w, cfg.n_max);
        j.raw("correlation", double_array(corr));
        j.num("decay_rate", correlation_decay_rate(corr));
    }
    return j.str_value() + "\n";
}

void write_atomic(const std::string& path, const std::string& payload) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DomainError("cannot open output path: " + path);
        f << payload;
        if (!f.good()) throw DomainError("write failed: " + path);
    }
    fs::rename(tmp, target);
}

int error_json(std::ostream& err, const std::string& type, const std::string& message,
               const std::vector<std::string>& details, int code) {
    JsonObject j;
    j.str("schema", "1");
    j.str("error", type);
    j.str("message", message);
    std::string darr = "[";
    for (size_t i = 0; i < details.size(); ++i) {
        if (i) darr += ',';
        darr += quote(details[i]);
    }
    j.raw("details", darr + "]");
    err << j.str_value() << "\n";
    return code;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const std::string format = resolve_format(cfg);
        std::string payload;
        if (cfg.command == "pressure-tree") payload = run_pressure_tree(cfg, format);
        else if (cfg.command == "pressure-ulam") payload = run_pressure_ulam(cfg, format);
        else if (cfg.command == "hyperbolicity") payload = run_hyperbolicity(cfg, format);
        else if (cfg.command == "scan") payload = run_scan(cfg, format);
        else if (cfg.command == "shrinking") payload = run_shrinking(cfg, format);
        else if (cfg.command == "distortion") payload = run_distortion(cfg, format);
        else if (cfg.command == "imfs") payload = run_imfs(cfg, format);
        else if (cfg.command == "lyapunov") payload = run_lyapunov(cfg, format);
        else if (cfg.command == "mixing") payload = run_mixing(cfg, format);
        else return error_json(err, "config", "unknown command", {cfg.command}, kExitPrecondition);

        if (cfg.output_path.empty())
            out << payload;
        else
            write_atomic(cfg.output_path, payload);
        return kExitOk;
    } catch (const ConfigError& e) {
        return error_json(err, "config", e.what(), e.errors, kExitPrecondition);
    } catch (const BudgetError& e) {
        return error_json(err, "budget", e.what(),
                          {"deepest_completed_level=" + std::to_string(e.deepest_completed_level)},
                          kExitBudget);
    } catch (const ConvergenceError& e) {
        return error_json(err, "convergence", e.what(),
                          {"residual=" + format_double(e.residual)}, kExitBudget);
    } catch (const PreconditionError& e) {
        return error_json(err, "precondition", e.what(), {}, kExitPrecondition);
    } catch (const DomainError& e) {
        return error_json(err, "domain", e.what(), {}, kExitPrecondition);
    } catch (const UnsupportedError& e) {
        return error_json(err, "unsupported", e.what(), {}, kExitPrecondition);
    } catch (const InfeasibleError& e) {
        return error_json(err, "infeasible", e.what(), {}, kExitPrecondition);
    } catch (const SingularityError& e) {
        return error_json(err, "singularity", e.what(), {}, kExitPrecondition);
    } catch (const std::exception& e) {
        return error_json(err, "internal", e.what(), {}, kExitPrecondition);
    }
}

} // namespace thermo
