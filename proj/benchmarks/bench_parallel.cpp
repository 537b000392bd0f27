// Compares the serial reference loops against the OpenMP kernels for the two
// data-parallel hot paths: the design grid search and the Monte Carlo
// replication sweep. Results must agree exactly; only the timing differs.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "histfuse/anova.hpp"
#include "histfuse/mc.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <typename Fn>
double time_of(Fn&& fn) {
    const auto t0 = clock_type::now();
    fn();
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace histfuse;
    const int threads = argc > 1 ? std::atoi(argv[1]) : 0;

    anova::OptimalDesign serial_design, parallel_design;
    const double t_grid_serial =
        time_of([&] { serial_design = anova::optimal_design_serial(1.0, 0.0005); });
    const double t_grid_parallel =
        time_of([&] { parallel_design = anova::optimal_design(1.0, 0.0005, 0.02, threads); });
    const bool grid_match = serial_design.value == parallel_design.value &&
                            serial_design.xi.xi11 == parallel_design.xi.xi11;

    mc::SimConfig cfg;
    cfg.scenario = mc::Scenario::AnovaTypeII;
    cfg.theta0 = 0.4;
    cfg.eta0 = 1.0;
    cfg.eta1 = 0.5;
    cfg.eta2 = -0.3;
    cfg.n = 2000;
    cfg.m = 2000;
    cfg.reps = 200000;
    cfg.seed = 7;
    cfg.threads = threads;

    mc::McReport serial_rep, parallel_rep;
    const double t_mc_serial = time_of([&] { serial_rep = mc::simulate_anova_serial(cfg); });
    const double t_mc_parallel = time_of([&] { parallel_rep = mc::simulate_anova(cfg); });
    const bool mc_match =
        (serial_rep.empirical_scaled_var - parallel_rep.empirical_scaled_var).max_abs() == 0.0;

    std::printf("kernel            serial[s]  openmp[s]  speedup  identical\n");
    std::printf("design grid        %8.3f   %8.3f   %6.2fx  %s\n", t_grid_serial,
                t_grid_parallel, t_grid_serial / t_grid_parallel, grid_match ? "yes" : "NO");
    std::printf("mc replications    %8.3f   %8.3f   %6.2fx  %s\n", t_mc_serial, t_mc_parallel,
                t_mc_serial / t_mc_parallel, mc_match ? "yes" : "NO");
    return grid_match && mc_match ? 0 : 1;
}
