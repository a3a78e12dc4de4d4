#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "canardkit/numerics/integrator.hpp"

namespace canardkit {

struct LimitCycleSummary {
    double amplitude_x = 0.0;
    double period = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    double x_min = 0.0;
    double x_max = 0.0;
    unsigned periods_observed = 0;
    /// Time spent along the repelling branch of the critical manifold during the last period.
    double repelling_time = 0.0;
};

struct LimitCycleOptions {
    /// Discarded initial time; negative selects 20/eps.
    double transient = -1.0;
    unsigned max_periods = 50;
    /// Observation window after the transient; negative selects 20/eps.
    double window = -1.0;
    State start{0.0, 0.0};
    IntegratorOptions integrator;
};

inline constexpr double kMinAmplitude = 1e-6;
inline constexpr double kPeriodAgreement = 1e-6;
inline constexpr double kDefaultThreshold = 2.0;
/// Slow time along the repelling branch that marks a large cycle as a canard with head.
inline constexpr double kCanardDwell = 0.01;

namespace detail {

/// Local extremum of x inside a step from the Hermite interpolant; nullopt if x' keeps its sign.
inline std::optional<double> refined_extremum(const StepData& s) {
    const double d0 = s.dy0[0];
    const double d1 = s.dy1[0];
    if ((d0 > 0) == (d1 > 0) && d0 != 0 && d1 != 0) return std::nullopt;
    // Bisection on the derivative of the interpolant.
    auto slope = [&](double t) {
        const double dt = (s.t1 - s.t0) * 1e-7;
        const double a = std::max(s.t0, t - dt);
        const double b = std::min(s.t1, t + dt);
        return (s.interpolate(b)[0] - s.interpolate(a)[0]) / (b - a);
    };
    double lo = s.t0;
    double hi = s.t1;
    const bool rising = d0 > 0 || (d0 == 0 && d1 < 0);
    for (int i = 0; i < 60 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((slope(mid) > 0) == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Discards the transient, then measures successive maxima of x (x' = 0 crossings from
/// above). NoOscillation when the orbit settles with amplitude below 1e-6.
inline LimitCycleSummary limit_cycle(const NumericSystem& sys, const LimitCycleOptions& opt = {}) {
    const double transient = opt.transient >= 0 ? opt.transient : 20.0 / sys.eps;
    const double window = opt.window > 0 ? opt.window : 20.0 / sys.eps;

    State y = opt.start;
    if (transient > 0) {
        integrate_observed(sys, y, 0.0, transient, opt.integrator, [&](const StepData& s) {
            y = s.y1;
            return true;
        });
    }

    LimitCycleSummary out;
    std::optional<double> last_max_t;
    double prev_period = std::numeric_limits<double>::quiet_NaN();
    double win_repelling = 0.0;
    double win_min = y[0];
    double win_max = y[0];
    double all_min = y[0];
    double all_max = y[0];
    bool settled_small = false;

    integrate_observed(sys, y, transient, transient + window, opt.integrator, [&](const StepData& s) {
        const double x1 = s.y1[0];
        const bool is_max = s.dy0[0] > 0 && s.dy1[0] <= 0;
        const bool is_min = s.dy0[0] < 0 && s.dy1[0] >= 0;
        double t_peak = s.t1;
        double x_peak = x1;
        if (is_max || is_min) {
            if (const auto tp = detail::refined_extremum(s)) {
                t_peak = *tp;
                x_peak = s.interpolate(*tp)[0];
            }
        }
        const State mid = s.interpolate(0.5 * (s.t0 + s.t1));
        if (sys.near_repelling_branch(mid[0], mid[1])) win_repelling += s.t1 - s.t0;
        win_min = std::min({win_min, x1, x_peak});
        win_max = std::max({win_max, x1, x_peak});
        all_min = std::min(all_min, win_min);
        all_max = std::max(all_max, win_max);
        if (!is_max) return true;
        if (last_max_t) {
            const double period = t_peak - *last_max_t;
            out.amplitude_x = win_max - win_min;
            out.x_min = win_min;
            out.x_max = win_max;
            out.period = period;
            out.repelling_time = win_repelling;
            ++out.periods_observed;
            if (out.amplitude_x < kMinAmplitude) {
                settled_small = true;
                return false;
            }
            if (std::isfinite(prev_period) && std::abs(period - prev_period) <= kPeriodAgreement * period) {
                out.converged = true;
                return false;
            }
            prev_period = period;
            if (out.periods_observed >= opt.max_periods) return false;
        }
        last_max_t = t_peak;
        win_min = win_max = x_peak;
        win_repelling = 0.0;
        return true;
    });

    if (settled_small || out.periods_observed == 0) {
        const double range = out.periods_observed == 0 ? all_max - all_min : out.amplitude_x;
        if (range < kMinAmplitude)
            throw Error(ErrorCode::NoOscillation, "orbit settles to an equilibrium (x-range " + std::to_string(range) + ")");
        if (out.periods_observed == 0) {
            out.amplitude_x = range;
            out.x_min = all_min;
            out.x_max = all_max;
        }
    }
    return out;
}

enum class CycleClass { relaxation, canard, none };

inline std::string_view cycle_class_name(CycleClass c) noexcept {
    switch (c) {
    case CycleClass::relaxation: return "relaxation";
    case CycleClass::canard: return "canard";
    case CycleClass::none: return "none";
    }
    return "none";
}

/// Small cycles and large cycles that follow the repelling branch are canards. The
/// explosion bisection looks at amplitude alone.
inline CycleClass classify(const std::optional<LimitCycleSummary>& s, double threshold = kDefaultThreshold) {
    if (!s) return CycleClass::none;
    if (s->amplitude_x < threshold || s->repelling_time >= kCanardDwell) return CycleClass::canard;
    return CycleClass::relaxation;
}

/// Amplitude, or nullopt when the orbit settles.
inline std::optional<LimitCycleSummary> probe_cycle(const SPSystem& s, double mu, double eps, const LimitCycleOptions& opt) {
    try {
        return limit_cycle(make_numeric_system(s, mu, eps), opt);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoOscillation) return std::nullopt;
        throw;
    }
}

struct ExplosionResult {
    double mu_star = 0.0;
    double bracket_width = 0.0;
    /// Amplitudes at the bracket ends on either side of the threshold.
    double amplitude_below = 0.0;
    double amplitude_above = 0.0;
    double mu_below = 0.0;
    double mu_above = 0.0;
    unsigned probes = 0;
};

struct ExplosionOptions {
    double threshold = kDefaultThreshold;
    double resolution = 1e-12;
    LimitCycleOptions cycle;
};

/// Bisection on mu between a relaxation end and a small-cycle (or equilibrium) end.
/// Either end may be the relaxation one.
inline ExplosionResult locate_explosion(const SPSystem& s, double eps, double mu_lo, double mu_hi, const ExplosionOptions& opt = {}) {
    if (!(opt.resolution > 0)) throw Error(ErrorCode::InvalidArgument, "bisection resolution must be positive");
    ExplosionResult r;
    auto amplitude = [&](double mu) {
        ++r.probes;
        const auto c = probe_cycle(s, mu, eps, opt.cycle);
        return c ? c->amplitude_x : 0.0;
    };
    const double a_lo = amplitude(mu_lo);
    const double a_hi = amplitude(mu_hi);
    const bool lo_above = a_lo >= opt.threshold;
    const bool hi_above = a_hi >= opt.threshold;
    if (lo_above == hi_above)
        throw Error(ErrorCode::BadBracket, "both bracket ends classify as " +
                                               std::string(lo_above ? "relaxation" : "small amplitude") + " (amplitudes " +
                                               std::to_string(a_lo) + ", " + std::to_string(a_hi) + ")");
    double above = lo_above ? mu_lo : mu_hi;
    double below = lo_above ? mu_hi : mu_lo;
    r.amplitude_above = lo_above ? a_lo : a_hi;
    r.amplitude_below = lo_above ? a_hi : a_lo;
    while (std::abs(above - below) > opt.resolution) {
        const double mid = 0.5 * (above + below);
        if (mid == above || mid == below) break;
        const double a = amplitude(mid);
        if (a >= opt.threshold) {
            above = mid;
            r.amplitude_above = a;
        } else {
            below = mid;
            r.amplitude_below = a;
        }
    }
    r.mu_above = above;
    r.mu_below = below;
    r.bracket_width = std::abs(above - below);
    r.mu_star = 0.5 * (above + below);
    return r;
}

struct SweepRow {
    double mu = 0.0;
    double amplitude_x = std::numeric_limits<double>::quiet_NaN();
    double period = std::numeric_limits<double>::quiet_NaN();
    std::string classification;
};

/// Independent limit-cycle runs, rows in input order; failures become "error:<Code>" rows.
inline std::vector<SweepRow> sweep(const SPSystem& s, double eps, const std::vector<double>& mu_values,
                                   const LimitCycleOptions& opt = {}, double threshold = kDefaultThreshold) {
    auto run = [&s, eps, opt, threshold](double mu) {
        SweepRow row;
        row.mu = mu;
        try {
            const auto c = probe_cycle(s, mu, eps, opt);
            if (c) {
                row.amplitude_x = c->amplitude_x;
                row.period = c->period;
            } else {
                row.amplitude_x = 0.0;
            }
            row.classification = std::string(cycle_class_name(classify(c, threshold)));
        } catch (const Error& e) {
            row.classification = "error:" + std::string(code_name(e.code()));
        }
        return row;
    };
    const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
    std::vector<SweepRow> rows(mu_values.size());
    for (std::size_t start = 0; start < mu_values.size(); start += workers) {
        std::vector<std::future<SweepRow>> batch;
        const std::size_t end = std::min(mu_values.size(), start + workers);
        for (std::size_t i = start; i < end; ++i) batch.push_back(std::async(std::launch::async, run, mu_values[i]));
        for (std::size_t i = start; i < end; ++i) rows[i] = batch[i - start].get();
    }
    return rows;
}

} // namespace canardkit
