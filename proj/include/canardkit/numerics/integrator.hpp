#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "canardkit/numerics/numeric_system.hpp"

namespace canardkit {

using State = std::array<double, 2>;

struct Sample {
    double t;
    double x;
    double y;
};

struct Trajectory {
    std::vector<Sample> samples;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

struct IntegratorOptions {
    double tol = 1e-10;
    double min_step = 1e-14;
    double initial_step = 1e-6;
};

/// One accepted step with the data needed for cubic Hermite interpolation.
struct StepData {
    double t0;
    double t1;
    State y0;
    State y1;
    State dy0;
    State dy1;

    State interpolate(double t) const {
        const double h = t1 - t0;
        const double s = (t - t0) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        State out{};
        for (std::size_t i = 0; i < 2; ++i) out[i] = h00 * y0[i] + h10 * h * dy0[i] + h01 * y1[i] + h11 * h * dy1[i];
        return out;
    }
};

/// Dormand-Prince 5(4) with error per component |e_i| / (tol + tol |y_i|) <= 1.
/// The observer sees every accepted step and may return false to stop early.
template <class Observer>
std::pair<std::size_t, std::size_t> integrate_observed(const NumericSystem& sys, State y, double t, double t_end,
                                                       const IntegratorOptions& opt, Observer&& observe) {
    if (!(opt.tol >= 1e-13 && opt.tol <= 1e-6))
        throw Error(ErrorCode::InvalidArgument, "tolerance must lie in [1e-13, 1e-6]");
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    (void)c2, (void)c3, (void)c4, (void)c5;

    auto f = [&](const State& s) { return sys.rhs(s[0], s[1]); };
    auto finite = [](const State& s) { return std::isfinite(s[0]) && std::isfinite(s[1]); };

    std::size_t accepted = 0;
    std::size_t rejected = 0;
    State k1 = f(y);
    if (!finite(y) || !finite(k1)) throw Error(ErrorCode::NonFinite, "non-finite initial state or derivative");
    double h = std::min(opt.initial_step, t_end - t);
    while (t < t_end) {
        const bool last = h >= t_end - t;
        if (last) h = t_end - t;
        State s{}, k2{}, k3{}, k4{}, k5{}, k6{}, y1{};
        for (int i = 0; i < 2; ++i) s[i] = y[i] + h * a21 * k1[i];
        k2 = f(s);
        for (int i = 0; i < 2; ++i) s[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(s);
        for (int i = 0; i < 2; ++i) s[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(s);
        for (int i = 0; i < 2; ++i) s[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(s);
        for (int i = 0; i < 2; ++i)
            s[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = f(s);
        for (int i = 0; i < 2; ++i) y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const State k7 = f(y1);
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = opt.tol + opt.tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        if (!std::isfinite(err) || !finite(y1)) {
            if (h <= opt.min_step) throw Error(ErrorCode::NonFinite, "state overflowed at t = " + std::to_string(t));
            ++rejected;
            h = std::max(opt.min_step, h * 0.1);
            continue;
        }
        if (err <= 1.0) {
            const StepData step{t, last ? t_end : t + h, y, y1, k1, k7};
            t = step.t1;
            y = y1;
            k1 = k7;
            ++accepted;
            if (!observe(step)) break;
        } else {
            ++rejected;
            if (h <= opt.min_step)
                throw Error(ErrorCode::StiffnessFloor, "step size fell below " + std::to_string(opt.min_step) + " at t = " + std::to_string(t));
        }
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::max(h * factor, opt.min_step);
    }
    return {accepted, rejected};
}

/// Adaptive integration from start over [0, t_end], one sample per accepted step.
inline Trajectory integrate(const NumericSystem& sys, State start, double t_end, const IntegratorOptions& opt = {}) {
    Trajectory tr;
    tr.samples.push_back({0.0, start[0], start[1]});
    const auto [acc, rej] = integrate_observed(sys, start, 0.0, t_end, opt, [&](const StepData& s) {
        tr.samples.push_back({s.t1, s.y1[0], s.y1[1]});
        return true;
    });
    tr.accepted = acc;
    tr.rejected = rej;
    return tr;
}

inline Trajectory integrate(const NumericSystem& sys, State start, double t_end, double tol) {
    IntegratorOptions opt;
    opt.tol = tol;
    return integrate(sys, start, t_end, opt);
}

} // namespace canardkit
