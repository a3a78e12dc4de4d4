// Trajectories across the canard explosion at eps = 0.01, with the critical manifold.
// Usage: figure1 [output-dir]
#include <filesystem>
#include <fstream>
#include <iostream>

#include "canardkit/numerics/csv.hpp"

int main(int argc, char** argv) {
    using namespace canardkit;
    const std::filesystem::path dir = argc > 1 ? argv[1] : ".";
    std::filesystem::create_directories(dir);
    const SPSystem s = vdp();
    const double eps = 0.01;
    const LimitCycleOptions opt;

    // Relaxation, two canard values, and past the Hopf point.
    const struct {
        const char* panel;
        double mu;
    } runs[] = {{"a", 0.99}, {"b", 0.99874045}, {"c", 0.998740451}, {"d", 1.01}};

    for (const auto& run : runs) {
        const NumericSystem n = make_numeric_system(s, run.mu, eps);
        const Trajectory t = integrate(n, opt.start, 30.0, opt.integrator);
        std::ofstream csv(dir / (std::string("trajectory_") + run.panel + ".csv"));
        write_trajectory_csv(csv, t);
        const auto cycle = probe_cycle(s, run.mu, eps, opt);
        std::cout << run.panel << "  mu = " << format_double(run.mu) << "  " << cycle_class_name(classify(cycle));
        if (cycle) std::cout << "  amplitude " << format_double(cycle->amplitude_x);
        std::cout << '\n';
    }
    std::ofstream manifold(dir / "critical_manifold.csv");
    write_manifold_csv(manifold, s, -2.5, 2.5, 501);
    std::ofstream meta(dir / "figure1.meta.json");
    meta << numeric_metadata(s, eps, opt).dump(2) << '\n';
}
