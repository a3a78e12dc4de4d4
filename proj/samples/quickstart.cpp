// Canard expansion of Van der Pol by both methods, then the explosion at eps = 0.05.
#include <iostream>

#include "canardkit/fcm/cross_validate.hpp"
#include "canardkit/fcm/extraction.hpp"
#include "canardkit/gspm/solver.hpp"
#include "canardkit/numerics/csv.hpp"

int main() {
    using namespace canardkit;
    const SPSystem s = vdp();
    const FoldPoint fold = select_fold(fold_points(critical_manifold(s)));

    const CanardExpansion g = expand_canard(s, 4, fold);
    const CanardExpansion f = fcm_expand(s, 3, fold);
    for (std::size_t k = 0; k < g.F.size(); ++k) std::cout << "F" << k << " = " << g.F[k].to_string() << '\n';
    for (std::size_t k = 0; k < g.mu.size(); ++k) std::cout << "mu" << k << " = " << to_string(g.mu[k]) << '\n';
    std::cout << "fcm agrees through order " << cross_validate(g, f).compared_order << ": " << std::boolalpha
              << cross_validate(g, f).equal << '\n';

    const double eps = 0.05;
    ExplosionOptions opt;
    opt.resolution = 1e-9;
    const ExplosionResult r = locate_explosion(s, eps, 0.95, 1.01, opt);
    std::cout << "series mu(0.05) = " << format_double(mu_series_eval(g, eps)) << '\n'
              << "bisection mu*   = " << format_double(r.mu_star) << '\n';
}
