#pragma once

#include <vector>

#include "canardkit/sysmodel/system.hpp"

namespace canardkit {

/// L_V p = p_x V_x + p_y V_y.
inline Polynomial lie_derivative(const Polynomial& p, const VectorField& v) {
    if (p.is_zero()) return {};
    return p.derivative(Var::x) * v.dx + p.derivative(Var::y) * v.dy;
}

/// Lie derivative along the fast-time field (f, eps g).
inline Polynomial lie_derivative(const Polynomial& p, const SPSystem& s) { return lie_derivative(p, fast_time_field(s)); }

/// Time derivatives of the trajectory: components[0] is the velocity, components[k] the
/// (k+1)-th derivative, each obtained from the previous one by L_V.
struct JetVector {
    std::vector<VectorField> components;
};

inline JetVector jets(const VectorField& v, unsigned count) {
    JetVector j;
    if (count == 0) return j;
    j.components.push_back(v);
    while (j.components.size() < count) {
        const VectorField& last = j.components.back();
        j.components.push_back({lie_derivative(last.dx, v), lie_derivative(last.dy, v)});
    }
    return j;
}

inline JetVector jets(const SPSystem& s, unsigned count) { return jets(fast_time_field(s), count); }

} // namespace canardkit
