#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "canardkit/numerics/limit_cycle.hpp"

#ifndef CANARDKIT_VERSION
#define CANARDKIT_VERSION "0.1.0"
#endif

namespace canardkit {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,x,y\n";
    for (const Sample& s : traj.samples) out << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << '\n';
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "mu,amplitude_x,period,classification\n";
    for (const SweepRow& r : rows)
        out << format_double(r.mu) << ',' << format_double(r.amplitude_x) << ',' << format_double(r.period) << ','
            << r.classification << '\n';
}

/// Samples of y = F0(x) on a uniform grid, skipping poles of F0.
inline void write_manifold_csv(std::ostream& out, const SPSystem& s, double x_lo, double x_hi, unsigned count) {
    if (count < 2 || !(x_hi > x_lo)) throw Error(ErrorCode::InvalidArgument, "manifold grid needs x_hi > x_lo and at least 2 points");
    const CriticalManifold m = critical_manifold(s);
    out << "x,y\n";
    for (unsigned i = 0; i < count; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (count - 1);
        const std::array<double, kNumVars> at{x, 0, 0, 0, 0};
        const double den = m.F0.den().evaluate_double(at);
        if (den == 0.0) continue;
        out << format_double(x) << ',' << format_double(m.F0.num().evaluate_double(at) / den) << '\n';
    }
}

/// Settings that determine a numerical run, for the metadata sidecar.
inline nlohmann::ordered_json numeric_metadata(const SPSystem& s, double eps, const LimitCycleOptions& opt) {
    nlohmann::ordered_json doc;
    doc["version"] = CANARDKIT_VERSION;
    doc["system"] = {{"name", s.name}, {"f", s.f.to_string()}, {"g", s.g.to_string()}};
    doc["eps"] = eps;
    doc["scheme"] = "Dormand-Prince 5(4), slow time (f/eps, g)";
    doc["tol"] = opt.integrator.tol;
    doc["min_step"] = opt.integrator.min_step;
    doc["initial_step"] = opt.integrator.initial_step;
    doc["start"] = {opt.start[0], opt.start[1]};
    doc["transient"] = opt.transient < 0 ? 20.0 / eps : opt.transient;
    doc["window"] = opt.window < 0 ? 20.0 / eps : opt.window;
    doc["max_periods"] = opt.max_periods;
    return doc;
}

} // namespace canardkit
