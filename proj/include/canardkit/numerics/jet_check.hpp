#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "canardkit/fcm/lie.hpp"
#include "canardkit/numerics/integrator.hpp"

namespace canardkit {

struct JetConsistency {
    unsigned trajectories = 0;
    /// Largest relative error of the first and second fast-time derivatives.
    double first = 0.0;
    double second = 0.0;
};

/// Compares the symbolic jets X', X'' of the fast-time field with centered differences
/// along numerically integrated trajectories at random (mu, eps, start, time).
inline JetConsistency jet_consistency(const SPSystem& s, std::uint64_t seed, unsigned count = 20, double h = 1e-4) {
    const JetVector j = jets(s, 2);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mu_dist(0.5, 1.5), eps_dist(0.01, 0.1), start_dist(-2.0, 2.0), time_dist(0.5, 2.0);
    IntegratorOptions io;
    io.tol = 1e-13;
    JetConsistency out;
    auto norm = [](double a, double b) { return std::hypot(a, b); };
    for (unsigned k = 0; k < count; ++k) {
        const double mu = mu_dist(rng), eps = eps_dist(rng);
        const State start{start_dist(rng), start_dist(rng)};
        const double T = time_dist(rng);
        const NumericSystem n = make_numeric_system(s, mu, eps);
        // Fast time t corresponds to slow time eps t.
        auto at = [&](double t_fast) {
            const Trajectory tr = integrate(n, start, eps * t_fast, io);
            return State{tr.samples.back().x, tr.samples.back().y};
        };
        const State lo = at(T - h), mid = at(T), hi = at(T + h);
        const CompiledPolynomial v[2] = {{j.components[0].dx, mu, eps}, {j.components[0].dy, mu, eps}};
        const CompiledPolynomial a[2] = {{j.components[1].dx, mu, eps}, {j.components[1].dy, mu, eps}};

        const double v0 = v[0](mid[0], mid[1]), v1 = v[1](mid[0], mid[1]);
        const double fd_v0 = (hi[0] - lo[0]) / (2 * h), fd_v1 = (hi[1] - lo[1]) / (2 * h);
        out.first = std::max(out.first, norm(fd_v0 - v0, fd_v1 - v1) / norm(v0, v1));

        const double a0 = a[0](mid[0], mid[1]), a1 = a[1](mid[0], mid[1]);
        const double fd_a0 = (v[0](hi[0], hi[1]) - v[0](lo[0], lo[1])) / (2 * h);
        const double fd_a1 = (v[1](hi[0], hi[1]) - v[1](lo[0], lo[1])) / (2 * h);
        out.second = std::max(out.second, norm(fd_a0 - a0, fd_a1 - a1) / norm(a0, a1));
        ++out.trajectories;
    }
    return out;
}

} // namespace canardkit
