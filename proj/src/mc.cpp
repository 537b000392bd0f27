#include "histfuse/mc.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "histfuse/asymvar.hpp"
#include "histfuse/fusion.hpp"
#include "histfuse/rng.hpp"

namespace histfuse::mc {

Scenario scenario_from_string(const std::string& s) {
    if (s == "anova-typeI") return Scenario::AnovaTypeI;
    if (s == "anova-typeII") return Scenario::AnovaTypeII;
    if (s == "anova-threearm") return Scenario::AnovaThreeArm;
    if (s == "bliss") return Scenario::Bliss;
    throw DomainError("ConfigError", "unknown scenario").with("scenario", s);
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::AnovaTypeI: return "anova-typeI";
        case Scenario::AnovaTypeII: return "anova-typeII";
        case Scenario::AnovaThreeArm: return "anova-threearm";
        case Scenario::Bliss: return "bliss";
    }
    return "?";
}

namespace {

using clock_type = std::chrono::steady_clock;

void check_common(const SimConfig& cfg) {
    if (cfg.reps < 1000)
        throw DomainError("ConfigError", "variance comparisons need at least 1000 replications")
            .with("reps", std::to_string(cfg.reps));
}

void check_anova(const SimConfig& cfg) {
    check_common(cfg);
    if (cfg.n < 1 || cfg.m < 1)
        throw DomainError("ConfigError", "current and historical sizes must be positive");
    if (!(cfg.sigma2 > 0.0)) throw DomainError("ConfigError", "sigma2 must be positive");
    if (cfg.scenario == Scenario::AnovaTypeII) cfg.design.validate();
    if (cfg.scenario == Scenario::AnovaThreeArm) {
        if (!(cfg.xi01 > 0.0) || !(cfg.xi10 > 0.0) || !(cfg.xi11 > 0.0) ||
            std::fabs(cfg.xi01 + cfg.xi10 + cfg.xi11 - 1.0) > 1e-9)
            throw DomainError("ConfigError", "three-arm fractions must be positive and sum to one");
    }
}

struct Moments {
    la::SymMatrix cov;
    std::vector<double> mean;
    double se_var_first = 0.0;  // fourth-moment standard error of cov(0,0)
};

// covariance in replication-index order; identical regardless of how the
// replications were produced
Moments column_moments(const std::vector<double>& data, std::size_t dim,
                       const std::vector<bool>& keep, std::int64_t kept) {
    Moments mo{la::SymMatrix(dim), std::vector<double>(dim, 0.0), 0.0};
    const std::size_t reps = keep.size();
    for (std::size_t r = 0; r < reps; ++r) {
        if (!keep[r]) continue;
        for (std::size_t j = 0; j < dim; ++j) mo.mean[j] += data[r * dim + j];
    }
    for (std::size_t j = 0; j < dim; ++j) mo.mean[j] /= static_cast<double>(kept);

    std::vector<double> acc(dim * dim, 0.0);
    double m4 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        if (!keep[r]) continue;
        for (std::size_t j = 0; j < dim; ++j) {
            const double dj = data[r * dim + j] - mo.mean[j];
            for (std::size_t k = j; k < dim; ++k)
                acc[j * dim + k] += dj * (data[r * dim + k] - mo.mean[k]);
        }
        const double d0 = data[r * dim] - mo.mean[0];
        m4 += d0 * d0 * d0 * d0;
    }
    const double denom = static_cast<double>(kept - 1);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t k = j; k < dim; ++k) mo.cov.set(j, k, acc[j * dim + k] / denom);

    const double s2 = mo.cov(0, 0);
    m4 /= static_cast<double>(kept);
    const double corr = (static_cast<double>(kept) - 3.0) / (static_cast<double>(kept) - 1.0);
    const double var_s2 = std::max(0.0, m4 - corr * s2 * s2) / static_cast<double>(kept);
    mo.se_var_first = std::sqrt(var_s2);
    return mo;
}

double max_abs_diff(const la::SymMatrix& a, const la::SymMatrix& b) {
    return (a - b).max_abs();
}

struct AnovaPlan {
    // standard deviations of the simulated group means
    double sd_hist = 0.0;                    // balanced historical groups of size m/4
    double sd00 = 0, sd10 = 0, sd01 = 0, sd11 = 0;
    double mean00 = 0, mean10 = 0, mean01 = 0, mean11 = 0;
    la::SymMatrix sigma;        // scaled historical covariance
    la::SymMatrix upsilon_ee;   // scaled current eta covariance (TypeII)
    la::Matrix regression;      // 1x3 row U_te U_ee^-1 (TypeII)
    la::SymMatrix eta_dagger_precision;  // TypeII/ThreeArm per-rep solve matrix
    la::Matrix s_map;            // ThreeArm: n A^T V^-1
    la::Matrix hist_map;         // ThreeArm: m Sigma^-1
    VarianceBlocks asym;
    std::vector<double> truth;
};

AnovaPlan make_plan(const SimConfig& cfg) {
    AnovaPlan plan;
    const double n = static_cast<double>(cfg.n);
    const double m = static_cast<double>(cfg.m);
    const double rho = n / m;
    plan.sd_hist = std::sqrt(4.0 * cfg.sigma2 / m);
    plan.sigma = anova::historical_sigma_balanced(cfg.sigma2);
    plan.truth = {cfg.theta0, cfg.eta0, cfg.eta1, cfg.eta2};

    const double sum_mean = cfg.eta0 + cfg.eta1 + cfg.eta2 + cfg.theta0;
    switch (cfg.scenario) {
        case Scenario::AnovaTypeI: {
            plan.sd11 = std::sqrt(cfg.sigma2 / n);
            plan.mean11 = sum_mean;
            ProblemSpec spec{la::Matrix(1, 1, {-1.0}), la::Matrix(1, 3, {-1, -1, -1}),
                             la::SymMatrix(1, {cfg.sigma2}), plan.sigma, std::nullopt, rho};
            plan.asym = variance_A(spec);
            break;
        }
        case Scenario::AnovaTypeII: {
            const anova::DesignXi& xi = cfg.design;
            plan.sd00 = std::sqrt(cfg.sigma2 / (n * xi.xi00));
            plan.sd10 = std::sqrt(cfg.sigma2 / (n * xi.xi10));
            plan.sd01 = std::sqrt(cfg.sigma2 / (n * xi.xi01));
            plan.sd11 = std::sqrt(cfg.sigma2 / (n * xi.xi11));
            plan.mean00 = cfg.eta0;
            plan.mean10 = cfg.eta0 + cfg.eta1;
            plan.mean01 = cfg.eta0 + cfg.eta2;
            plan.mean11 = sum_mean;
            const VarianceBlocks upsilon = anova::upsilon_of_design(xi, cfg.sigma2);
            plan.upsilon_ee = upsilon.ee;
            plan.regression =
                la::solve_spd(upsilon.ee, upsilon.te.transpose()).transpose();
            const double x11 = xi.xi11;
            ProblemSpec spec{la::Matrix(1, 1, {-x11}),
                             la::Matrix(1, 3, {-x11, -x11, -x11}),
                             la::SymMatrix(1, {x11 * cfg.sigma2}), plan.sigma,
                             upsilon.ee, rho};
            plan.asym = variance_B(spec);
            break;
        }
        case Scenario::AnovaThreeArm: {
            plan.sd10 = std::sqrt(cfg.sigma2 / (n * cfg.xi01));  // arm observing eta0+eta1
            plan.sd01 = std::sqrt(cfg.sigma2 / (n * cfg.xi10));  // arm observing eta0+eta2
            plan.sd11 = std::sqrt(cfg.sigma2 / (n * cfg.xi11));
            plan.mean10 = cfg.eta0 + cfg.eta1;
            plan.mean01 = cfg.eta0 + cfg.eta2;
            plan.mean11 = sum_mean;
            const la::Matrix a(2, 3, {1, 1, 0, 1, 0, 1});
            const la::SymMatrix v =
                la::SymMatrix::diagonal({cfg.sigma2 / cfg.xi01, cfg.sigma2 / cfg.xi10});
            const la::Matrix v_inv = la::invert(v).mat();
            plan.s_map = (a.transpose() * v_inv) * n;
            plan.hist_map = la::invert(plan.sigma).mat() * m;
            plan.eta_dagger_precision = la::SymMatrix::from_matrix(
                plan.s_map * a + plan.hist_map, 1e-9);
            // scaled blocks: ee = (A^T V^-1 A + (rho Sigma)^-1)^-1, te = -1^T ee
            const la::SymMatrix g = la::SymMatrix::from_matrix(
                a.transpose() * v_inv * a + la::invert(plan.sigma * rho).mat(), 1e-9);
            const la::SymMatrix ee = la::invert(g);
            la::Matrix te(1, 3);
            for (std::size_t j = 0; j < 3; ++j)
                te(0, j) = -(ee(0, j) + ee(1, j) + ee(2, j));
            const double tt = anova::var_theta_D(cfg.xi01, cfg.xi10, cfg.xi11, rho, cfg.sigma2);
            plan.asym = VarianceBlocks(la::SymMatrix(1, {tt}), te, ee);
            break;
        }
        case Scenario::Bliss:
            throw DomainError("ConfigError", "interaction scenario uses simulate_bliss");
    }
    return plan;
}

// one factorial replication; writes (theta_est, eta_est[3], [theta_C]) into row
void anova_replication(const SimConfig& cfg, const AnovaPlan& plan, std::uint64_t rep,
                       double* row) {
    RepStream rng(cfg.seed, rep);
    const double y0s1 = rng.normal(cfg.eta0, plan.sd_hist);
    const double y1s1 = rng.normal(cfg.eta0 + cfg.eta1, plan.sd_hist);
    const double y0s2 = rng.normal(cfg.eta0, plan.sd_hist);
    const double y2s2 = rng.normal(cfg.eta0 + cfg.eta2, plan.sd_hist);
    const double h0 = 0.5 * (y0s1 + y0s2);
    const std::vector<double> eta_hat{h0, y1s1 - h0, y2s2 - h0};

    switch (cfg.scenario) {
        case Scenario::AnovaTypeI: {
            const double y11 = rng.normal(plan.mean11, plan.sd11);
            row[0] = y11 - eta_hat[0] - eta_hat[1] - eta_hat[2];
            row[1] = eta_hat[0];
            row[2] = eta_hat[1];
            row[3] = eta_hat[2];
            return;
        }
        case Scenario::AnovaTypeII: {
            const double y00 = rng.normal(plan.mean00, plan.sd00);
            const double y10 = rng.normal(plan.mean10, plan.sd10);
            const double y01 = rng.normal(plan.mean01, plan.sd01);
            const double y11 = rng.normal(plan.mean11, plan.sd11);
            const std::vector<double> eta_tilde{y00, y10 - y00, y01 - y00};
            const double theta_tilde = y11 - y10 - y01 + y00;

            const Estimate fused = combine_eta(
                Estimate(eta_tilde, plan.upsilon_ee, cfg.n),
                HistoricalSet::single(Estimate(eta_hat, plan.sigma, cfg.m)));
            const double theta_b =
                y11 - fused.value[0] - fused.value[1] - fused.value[2];
            double adj = 0.0;
            for (std::size_t j = 0; j < 3; ++j)
                adj += plan.regression(0, j) * (eta_tilde[j] - fused.value[j]);
            const double theta_c = theta_tilde - adj;
            row[0] = theta_b;
            row[1] = fused.value[0];
            row[2] = fused.value[1];
            row[3] = fused.value[2];
            row[4] = theta_c;
            return;
        }
        case Scenario::AnovaThreeArm: {
            const double y1 = rng.normal(plan.mean10, plan.sd10);
            const double y2 = rng.normal(plan.mean01, plan.sd01);
            const double y11 = rng.normal(plan.mean11, plan.sd11);
            std::vector<double> rhs = plan.s_map * std::vector<double>{y1, y2};
            const std::vector<double> hist_part = plan.hist_map * eta_hat;
            for (std::size_t j = 0; j < 3; ++j) rhs[j] += hist_part[j];
            const std::vector<double> eta_dag =
                la::solve_spd(plan.eta_dagger_precision, rhs);
            row[0] = y11 - eta_dag[0] - eta_dag[1] - eta_dag[2];
            row[1] = eta_dag[0];
            row[2] = eta_dag[1];
            row[3] = eta_dag[2];
            return;
        }
        case Scenario::Bliss:
            break;
    }
}

McReport finish_anova(const SimConfig& cfg, const AnovaPlan& plan,
                      const std::vector<double>& rows, std::size_t stride, double elapsed) {
    const std::vector<bool> keep(cfg.reps, true);
    McReport rep;
    rep.reps_used = cfg.reps;
    const Moments mo = column_moments(rows, stride, keep, cfg.reps);

    const double n = static_cast<double>(cfg.n);
    la::SymMatrix emp(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) emp.set(i, j, n * mo.cov(i, j));
    rep.empirical_scaled_var = emp;
    rep.asymptotic = plan.asym.assemble();
    rep.bias.resize(4);
    for (std::size_t j = 0; j < 4; ++j) rep.bias[j] = mo.mean[j] - plan.truth[j];
    rep.rel_err = max_abs_diff(emp, rep.asymptotic) / std::max(rep.asymptotic.max_abs(), 1e-300);
    rep.theta_mc_se = n * mo.se_var_first;

    if (cfg.scenario == Scenario::AnovaTypeII) {
        double worst = 0.0;
        for (std::int64_t r = 0; r < cfg.reps; ++r)
            worst = std::max(worst,
                             std::fabs(rows[r * stride] - rows[r * stride + 4]));
        rep.max_bc_discrepancy = worst;
    }
    rep.elapsed_sec = elapsed;
    return rep;
}

template <typename Fn>
void run_reps(std::int64_t reps, int threads, bool parallel, Fn&& body) {
#ifdef _OPENMP
    if (parallel) {
        if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel for schedule(static)
        for (std::int64_t r = 0; r < reps; ++r) body(r);
        return;
    }
#else
    (void)threads;
    (void)parallel;
#endif
    for (std::int64_t r = 0; r < reps; ++r) body(r);
}

McReport simulate_anova_impl(const SimConfig& cfg, bool parallel) {
    check_anova(cfg);
    const AnovaPlan plan = make_plan(cfg);
    const std::size_t stride = cfg.scenario == Scenario::AnovaTypeII ? 5 : 4;
    std::vector<double> rows(static_cast<std::size_t>(cfg.reps) * stride, 0.0);
    const auto t0 = clock_type::now();
    run_reps(cfg.reps, cfg.threads, parallel, [&](std::int64_t r) {
        anova_replication(cfg, plan, static_cast<std::uint64_t>(r),
                          rows.data() + static_cast<std::size_t>(r) * stride);
    });
    const double elapsed = std::chrono::duration<double>(clock_type::now() - t0).count();
    return finish_anova(cfg, plan, rows, stride, elapsed);
}

McReport simulate_bliss_impl(const SimConfig& cfg, bool parallel) {
    check_common(cfg);
    cfg.bliss_inst.validate();
    const bliss::Allocation& alloc = cfg.bliss_alloc;
    const double theta =
        cfg.bliss_theta > 0.0 ? cfg.bliss_theta : cfg.bliss_inst.theta_independent();
    const double expected = bliss::bliss_variance(alloc, cfg.bliss_inst, theta);

    const std::int64_t n12 = alloc.n12;
    const std::int64_t t1 = alloc.n1 + cfg.bliss_inst.m1;
    const std::int64_t t2 = alloc.n2 + cfg.bliss_inst.m2;
    const double e1 = cfg.bliss_inst.eta1_hat;
    const double e2 = cfg.bliss_inst.eta2_hat;
    const double truth = std::log(theta) - std::log(e1) - std::log(e2);

    std::vector<double> phi(cfg.reps, 0.0);
    std::vector<std::uint8_t> ok(cfg.reps, 0);
    const auto t0 = clock_type::now();
    run_reps(cfg.reps, cfg.threads, parallel, [&](std::int64_t r) {
        RepStream rng(cfg.seed, static_cast<std::uint64_t>(r));
        const std::int64_t x12 = rng.binomial(n12, theta);
        const std::int64_t x1 = rng.binomial(t1, e1);
        const std::int64_t x2 = rng.binomial(t2, e2);
        if (x12 == 0 || x1 == 0 || x2 == 0) return;  // log undefined: reject
        ok[r] = 1;
        phi[r] = std::log(static_cast<double>(x12) / static_cast<double>(n12)) -
                 std::log(static_cast<double>(x1) / static_cast<double>(t1)) -
                 std::log(static_cast<double>(x2) / static_cast<double>(t2));
    });
    const double elapsed = std::chrono::duration<double>(clock_type::now() - t0).count();

    std::vector<bool> keep(cfg.reps);
    std::int64_t kept = 0;
    for (std::int64_t r = 0; r < cfg.reps; ++r) {
        keep[r] = ok[r] != 0;
        kept += ok[r];
    }
    if (kept < 2) throw DomainError("ConfigError", "all replications were rejected");
    const Moments mo = column_moments(phi, 1, keep, kept);

    McReport rep;
    rep.reps_used = kept;
    rep.rejection_rate =
        1.0 - static_cast<double>(kept) / static_cast<double>(cfg.reps);
    rep.empirical_scaled_var = la::SymMatrix(1, {mo.cov(0, 0)});
    rep.asymptotic = la::SymMatrix(1, {expected});
    rep.bias = {mo.mean[0] - truth};
    rep.rel_err = std::fabs(mo.cov(0, 0) - expected) / expected;
    rep.theta_mc_se = mo.se_var_first;
    rep.elapsed_sec = elapsed;
    return rep;
}

}  // namespace

McReport simulate_anova(const SimConfig& cfg) { return simulate_anova_impl(cfg, true); }
McReport simulate_anova_serial(const SimConfig& cfg) { return simulate_anova_impl(cfg, false); }
McReport simulate_bliss(const SimConfig& cfg) { return simulate_bliss_impl(cfg, true); }
McReport simulate_bliss_serial(const SimConfig& cfg) { return simulate_bliss_impl(cfg, false); }

double verify_coincidence(const SimConfig& cfg) {
    if (cfg.scenario != Scenario::AnovaTypeII)
        throw DomainError("ConfigError", "coincidence check runs on the anova-typeII scenario");
    return simulate_anova(cfg).max_bc_discrepancy;
}

}  // namespace histfuse::mc
