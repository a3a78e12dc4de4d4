#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "canardkit/fcm/cross_validate.hpp"
#include "canardkit/fcm/darboux.hpp"
#include "canardkit/fcm/extraction.hpp"
#include "canardkit/gspm/solver.hpp"
#include "canardkit/numerics/csv.hpp"
#include "canardkit/numerics/jet_check.hpp"

namespace canardkit::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kSolverError = 2, kNumericError = 3, kUsage = 64 };

struct RunConfig {
    std::string command;
    std::string system = "vdp";
    Method method = Method::gspm;
    int order = 3;
    double eps = 0.01;
    std::optional<double> fold;
    double tol = 1e-10;
    std::string output;
    std::string meta;
    std::uint64_t seed = 1;

    double mu = 0.9;
    std::vector<double> mu_values;
    double t_end = 10.0;
    std::vector<double> start{0.0, 0.0};
    std::string manifold;
    std::optional<double> mu_lo;
    std::optional<double> mu_hi;
    double threshold = kDefaultThreshold;
    double resolution = 1e-12;
    bool skip_numeric = false;
    std::string expansion;
    int index = 1;
};

/// Bad flag values; reported with exit code 64.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void validate(const RunConfig& c) {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw UsageError(what);
    };
    if (c.command == "expand") need(c.order >= 1, "--order must be at least 1");
    if (c.command == "mu") {
        need(c.order >= 0, "--order must be non-negative");
        need(c.eps >= 0, "--eps must be non-negative");
    }
    if (c.command == "check") need(c.order >= 1, "--order must be at least 1");
    if (c.command == "curvature") need(c.index >= 1, "--index must be at least 1");
    if (c.command == "simulate" || c.command == "sweep" || c.command == "explode" || (c.command == "check" && !c.skip_numeric)) {
        need(c.eps > 0, "--eps must be positive");
        need(c.tol >= 1e-13 && c.tol <= 1e-6, "--tol must lie in [1e-13, 1e-6]");
    }
    if (c.command == "simulate") {
        need(c.t_end > 0, "--tend must be positive");
        need(c.start.size() == 2, "--start takes two values x,y");
    }
    if (c.command == "explode") {
        need(c.resolution > 0, "--resolution must be positive");
        need(c.threshold > 0, "--threshold must be positive");
    }
}

/// Parses argv into a config. Help output goes to `out`; returns nullopt with `code` set when
/// the process should exit without running a command.
inline std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, int& code) {
    RunConfig c;
    CLI::App app{"Canard expansions and canard explosions of planar slow-fast systems", "canardkit"};
    app.set_version_flag("--version", CANARDKIT_VERSION);
    app.require_subcommand(1);

    std::string method = "gspm";
    auto system_opts = [&](CLI::App* sub) {
        sub->add_option("--system", c.system, "builtin 'vdp' or a system JSON file")->capture_default_str();
        sub->add_option("--fold", c.fold, "x0 of the fold to use (nearest is chosen; default: largest)");
    };
    auto numeric_opts = [&](CLI::App* sub) {
        sub->add_option("--eps", c.eps, "singular perturbation parameter")->capture_default_str();
        sub->add_option("--tol", c.tol, "integrator tolerance")->capture_default_str();
        sub->add_option("--meta", c.meta, "metadata sidecar path (default: <output>.meta.json)");
    };

    CLI::App* expand = app.add_subcommand("expand", "canard expansion as JSON");
    system_opts(expand);
    expand->add_option("--method", method, "gspm or fcm")->check(CLI::IsMember({"gspm", "fcm"}))->capture_default_str();
    expand->add_option("--order", c.order, "expansion order N >= 1")->capture_default_str();
    expand->add_option("-o,--output", c.output, "output file (default: stdout)");

    CLI::App* mu = app.add_subcommand("mu", "evaluate the mu series at eps");
    system_opts(mu);
    mu->add_option("--method", method, "gspm or fcm")->check(CLI::IsMember({"gspm", "fcm"}))->capture_default_str();
    mu->add_option("--eps", c.eps, "eps >= 0")->capture_default_str();
    mu->add_option("--order", c.order, "highest power of eps kept")->capture_default_str();

    CLI::App* simulate = app.add_subcommand("simulate", "trajectory CSV");
    system_opts(simulate);
    numeric_opts(simulate);
    simulate->add_option("--mu", c.mu, "parameter value")->capture_default_str();
    simulate->add_option("--tend", c.t_end, "final time")->capture_default_str();
    simulate->add_option("--start", c.start, "initial point x,y")->delimiter(',')->expected(2);
    simulate->add_option("--manifold", c.manifold, "also write critical manifold samples x,y to this file");
    simulate->add_option("-o,--output", c.output, "CSV file (default: stdout)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "limit cycles over a list of mu values");
    system_opts(sweep_cmd);
    numeric_opts(sweep_cmd);
    sweep_cmd->add_option("--mu", c.mu_values, "comma-separated mu values")->delimiter(',')->required();
    sweep_cmd->add_option("--threshold", c.threshold, "amplitude separating small cycles")->capture_default_str();
    sweep_cmd->add_option("-o,--output", c.output, "CSV file (default: stdout)");

    CLI::App* explode = app.add_subcommand("explode", "bisection for the canard explosion");
    system_opts(explode);
    numeric_opts(explode);
    explode->add_option("--lo", c.mu_lo, "bracket end (default: mu_0 - 0.01)");
    explode->add_option("--hi", c.mu_hi, "bracket end (default: mu_0 + 0.01)");
    explode->add_option("--threshold", c.threshold, "amplitude threshold")->capture_default_str();
    explode->add_option("--resolution", c.resolution, "final bracket width")->capture_default_str();
    explode->add_option("-o,--output", c.output, "CSV file (default: stdout)");

    CLI::App* check = app.add_subcommand("check", "cross-validation report");
    system_opts(check);
    numeric_opts(check);
    check->add_option("--order", c.order, "expansion order to compare")->capture_default_str();
    check->add_flag("--skip-numeric", c.skip_numeric, "symbolic checks only");
    check->add_option("--expansion", c.expansion, "expansion JSON to compare against a fresh computation");
    check->add_option("--seed", c.seed, "seed for randomized probes")->capture_default_str();

    CLI::App* curvature = app.add_subcommand("curvature", "curvature manifold as JSON");
    system_opts(curvature);
    curvature->add_option("--index", c.index, "curvature index i >= 1")->capture_default_str();
    curvature->add_option("-o,--output", c.output, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        code = kOk;
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        code = kOk;
        return std::nullopt;
    } catch (const CLI::CallForVersion&) {
        out << CANARDKIT_VERSION << '\n';
        code = kOk;
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    c.command = app.get_subcommands().front()->get_name();
    c.method = method == "fcm" ? Method::fcm : Method::gspm;
    validate(c);
    return c;
}

namespace detail {

/// Writes to the named file, or to `fallback` when the name is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    write(f);
    if (!f) throw Error(ErrorCode::InvalidArgument, "write to '" + path + "' failed");
}

inline void emit_meta(const RunConfig& c, const nlohmann::ordered_json& meta) {
    const std::string path = !c.meta.empty() ? c.meta : c.output.empty() ? std::string() : c.output + ".meta.json";
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    f << meta.dump(2) << '\n';
}

inline FoldPoint chosen_fold(const SPSystem& s, const RunConfig& c) { return select_fold(fold_points(critical_manifold(s)), c.fold); }

inline CanardExpansion expansion(const SPSystem& s, const RunConfig& c, unsigned order) {
    const FoldPoint fold = chosen_fold(s, c);
    return c.method == Method::fcm ? fcm_expand(s, order, fold) : expand_canard(s, order, fold);
}

inline LimitCycleOptions cycle_options(const RunConfig& c) {
    LimitCycleOptions opt;
    opt.integrator.tol = c.tol;
    return opt;
}

/// Default bracket mu_0 -+ 0.01 from an order-1 expansion at the chosen fold.
inline std::pair<double, double> bracket(const SPSystem& s, const RunConfig& c) {
    if (c.mu_lo && c.mu_hi) return {*c.mu_lo, *c.mu_hi};
    const double mu0 = to_double(expand_canard(s, 1, chosen_fold(s, c)).mu[0]);
    return {c.mu_lo.value_or(mu0 - 0.01), c.mu_hi.value_or(mu0 + 0.01)};
}

} // namespace detail

inline int cmd_expand(const RunConfig& c, std::ostream& out) {
    const CanardExpansion e = detail::expansion(load_system(c.system), c, static_cast<unsigned>(c.order));
    detail::emit(c.output, out, [&](std::ostream& o) { o << expansion_to_json(e).dump(2) << '\n'; });
    return kOk;
}

inline int cmd_mu(const RunConfig& c, std::ostream& out) {
    const unsigned degree = static_cast<unsigned>(c.order);
    const CanardExpansion e = detail::expansion(load_system(c.system), c, degree + 1);
    out << format_double(mu_series_eval(e, c.eps, degree)) << '\n';
    return kOk;
}

inline int cmd_simulate(const RunConfig& c, std::ostream& out) {
    const SPSystem s = load_system(c.system);
    const NumericSystem n = make_numeric_system(s, c.mu, c.eps);
    IntegratorOptions io;
    io.tol = c.tol;
    const Trajectory t = integrate(n, {c.start[0], c.start[1]}, c.t_end, io);
    detail::emit(c.output, out, [&](std::ostream& o) { write_trajectory_csv(o, t); });

    LimitCycleOptions lo = detail::cycle_options(c);
    lo.start = {c.start[0], c.start[1]};
    nlohmann::ordered_json meta = numeric_metadata(s, c.eps, lo);
    meta["command"] = "simulate";
    meta["mu"] = c.mu;
    meta["t_end"] = c.t_end;
    meta["accepted_steps"] = t.accepted;
    meta["rejected_steps"] = t.rejected;
    const auto cycle = probe_cycle(s, c.mu, c.eps, lo);
    meta["cycle"] = {{"classification", std::string(cycle_class_name(classify(cycle)))},
                     {"amplitude_x", cycle ? cycle->amplitude_x : 0.0},
                     {"period", cycle ? nlohmann::ordered_json(cycle->period) : nlohmann::ordered_json(nullptr)},
                     {"repelling_time", cycle ? cycle->repelling_time : 0.0}};
    if (!c.manifold.empty()) {
        double lo_x = t.samples.front().x, hi_x = lo_x;
        for (const Sample& p : t.samples) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
        }
        if (hi_x - lo_x < 1e-9) hi_x = lo_x + 1.0;
        detail::emit(c.manifold, out, [&](std::ostream& o) { write_manifold_csv(o, s, lo_x, hi_x, 401); });
        meta["manifold"] = c.manifold;
    }
    detail::emit_meta(c, meta);
    return kOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out) {
    const SPSystem s = load_system(c.system);
    const LimitCycleOptions lo = detail::cycle_options(c);
    const auto rows = sweep(s, c.eps, c.mu_values, lo, c.threshold);
    detail::emit(c.output, out, [&](std::ostream& o) { write_sweep_csv(o, rows); });
    nlohmann::ordered_json meta = numeric_metadata(s, c.eps, lo);
    meta["command"] = "sweep";
    meta["threshold"] = c.threshold;
    meta["canard_dwell"] = kCanardDwell;
    detail::emit_meta(c, meta);
    return kOk;
}

inline int cmd_explode(const RunConfig& c, std::ostream& out) {
    const SPSystem s = load_system(c.system);
    const auto [lo, hi] = detail::bracket(s, c);
    ExplosionOptions opt;
    opt.threshold = c.threshold;
    opt.resolution = c.resolution;
    opt.cycle = detail::cycle_options(c);
    const ExplosionResult r = locate_explosion(s, c.eps, lo, hi, opt);
    detail::emit(c.output, out, [&](std::ostream& o) {
        o << "mu_star,bracket_width,mu_below,mu_above,amplitude_below,amplitude_above,probes\n"
          << format_double(r.mu_star) << ',' << format_double(r.bracket_width) << ',' << format_double(r.mu_below) << ','
          << format_double(r.mu_above) << ',' << format_double(r.amplitude_below) << ',' << format_double(r.amplitude_above)
          << ',' << r.probes << '\n';
    });
    nlohmann::ordered_json meta = numeric_metadata(s, c.eps, opt.cycle);
    meta["command"] = "explode";
    meta["bracket"] = {lo, hi};
    meta["threshold"] = c.threshold;
    meta["resolution"] = c.resolution;
    detail::emit_meta(c, meta);
    return kOk;
}

inline int cmd_curvature(const RunConfig& c, std::ostream& out) {
    const CurvatureManifold m = curvature_manifold(load_system(c.system), static_cast<unsigned>(c.index));
    detail::emit(c.output, out, [&](std::ostream& o) { o << curvature_to_json(m).dump(2) << '\n'; });
    return kOk;
}

/// One line per item: "PASS name: detail" or "FAIL name: detail".
inline int cmd_check(const RunConfig& c, std::ostream& out) {
    const SPSystem s = load_system(c.system);
    const FoldPoint fold = detail::chosen_fold(s, c);
    const auto N = static_cast<unsigned>(c.order);
    bool all = true;
    auto report = [&](bool ok, const std::string& name, const std::string& detail) {
        all = all && ok;
        out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    };
    auto divergences = [](const CrossValidation& v) {
        std::string d;
        for (const auto& item : v.divergences) d += (d.empty() ? "" : ",") + item;
        return v.equal ? "equal through order " + std::to_string(v.compared_order) : "differs at " + d;
    };

    const CanardExpansion g = expand_canard(s, N, fold);
    const CrossValidation methods = cross_validate(g, fcm_expand(s, N, fold));
    report(methods.equal, "gspm_fcm_equality", divergences(methods));
    if (!c.expansion.empty()) {
        std::ifstream in(c.expansion);
        if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open expansion file '" + c.expansion + "'");
        std::stringstream text;
        text << in.rdbuf();
        const CanardExpansion file = expansion_from_json(text.str());
        const CrossValidation v = cross_validate(file, expand_canard(s, std::max(1U, file.order), file.fold.exact() ? file.fold : fold));
        report(v.equal, "expansion_file_equality", divergences(v));
    }
    for (unsigned n = 1; n <= N; ++n) {
        const InvarianceResidual r = invariance_residual(s, expand_canard(s, n, fold));
        report(r.verified_order >= static_cast<int>(n), "invariance_order_" + std::to_string(n),
               "zero through eps^" + std::to_string(r.verified_order));
    }
    {
        const VectorField field{parse_polynomial("x"), parse_polynomial("2*y")};
        const DarbouxReport exact = darboux_check(parse_polynomial("y - x^2"), field);
        report(exact.exact && exact.cofactor && *exact.cofactor == Polynomial(BigRational(2)), "darboux_exact",
               exact.cofactor ? "cofactor " + exact.cofactor->to_string() : "no cofactor");
        const DarbouxReport line = darboux_check(parse_polynomial("y - x"), field);
        report(!line.exact, "darboux_non_invariant", line.exact ? "reported invariant" : "remainder " + line.remainder.to_string());
    }
    if (!c.skip_numeric) {
        const JetConsistency jc = jet_consistency(s, c.seed);
        report(jc.first <= 1e-5 && jc.second <= 1e-5, "jet_consistency",
               std::to_string(jc.trajectories) + " trajectories, max relative error " + format_double(std::max(jc.first, jc.second)));
        const double series = mu_series_eval(expand_canard(s, 4, fold), c.eps, 3);
        const auto [lo, hi] = detail::bracket(s, c);
        ExplosionOptions opt;
        opt.resolution = 1e-9;
        opt.cycle = detail::cycle_options(c);
        const ExplosionResult r = locate_explosion(s, c.eps, lo, hi, opt);
        report(std::abs(r.mu_star - series) <= 5e-4 && r.bracket_width <= 1e-6, "series_vs_bisection",
               "mu_star " + format_double(r.mu_star) + ", series " + format_double(series) + ", width " + format_double(r.bracket_width));
    }
    return all ? kOk : kCheckFailed;
}

inline int run(const RunConfig& c, std::ostream& out) {
    if (c.command == "expand") return cmd_expand(c, out);
    if (c.command == "mu") return cmd_mu(c, out);
    if (c.command == "simulate") return cmd_simulate(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out);
    if (c.command == "explode") return cmd_explode(c, out);
    if (c.command == "check") return cmd_check(c, out);
    if (c.command == "curvature") return cmd_curvature(c, out);
    throw UsageError("unknown command '" + c.command + "'");
}

inline std::string error_json(std::string_view code, const std::string& message, const ParseError* pe = nullptr) {
    nlohmann::ordered_json doc;
    doc["code"] = std::string(code);
    doc["message"] = message;
    if (pe) {
        doc["line"] = pe->line();
        doc["column"] = pe->column();
    }
    return doc.dump();
}

/// Full command-line entry point with the exit-code contract.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        int code = kOk;
        const auto cfg = parse_args(argc, argv, out, code);
        if (!cfg) return code;
        return run(*cfg, out);
    } catch (const UsageError& e) {
        err << error_json("UsageError", e.what()) << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << error_json(code_name(e.code()), e.what(), &e) << '\n';
        return kSolverError;
    } catch (const Error& e) {
        err << error_json(code_name(e.code()), e.what()) << '\n';
        return is_numeric_error(e.code()) ? kNumericError : kSolverError;
    } catch (const std::exception& e) {
        err << error_json("InternalError", e.what()) << '\n';
        return kSolverError;
    }
}

} // namespace canardkit::cli
