#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "canardkit/gspm/expansion.hpp"

namespace canardkit {

struct CrossValidation {
    bool equal = true;
    unsigned compared_order = 0;
    /// One entry per differing item, first divergence first ("F2", "mu1", "fold").
    std::vector<std::string> divergences;
};

/// Exact comparison of F_0..F_m and mu_0..mu_{m-1} with m the smaller order.
inline CrossValidation cross_validate(const CanardExpansion& a, const CanardExpansion& b) {
    CrossValidation r;
    r.compared_order = std::min(a.order, b.order);
    if (a.fold.exact_x0 != b.fold.exact_x0 || (!a.fold.exact() && a.fold.x0 != b.fold.x0)) r.divergences.push_back("fold");
    for (unsigned k = 0; k <= r.compared_order; ++k) {
        if (k >= a.F.size() || k >= b.F.size() || a.F[k] != b.F[k]) r.divergences.push_back("F" + std::to_string(k));
        if (k < r.compared_order && (k >= a.mu.size() || k >= b.mu.size() || a.mu[k] != b.mu[k]))
            r.divergences.push_back("mu" + std::to_string(k));
    }
    r.equal = r.divergences.empty();
    return r;
}

} // namespace canardkit
