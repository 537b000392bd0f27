#ifndef HISTFUSE_ANOVA_HPP
#define HISTFUSE_ANOVA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "histfuse/estimates.hpp"

// Two-way factorial application: fusing two historical two-arm studies with a
// four-cell current study, variance formulas for the plug-in, re-estimation
// and three-arm estimators of the interaction, and the allocation search.

namespace histfuse::anova {

// Sufficient statistics of the two historical studies: study 1 compares
// treatment 1 with control, study 2 compares treatment 2 with control.
struct AnovaHistorical {
    double y0_s1 = 0.0;  // control mean, study 1
    double y1_s1 = 0.0;  // treatment-1 mean, study 1
    double y0_s2 = 0.0;  // control mean, study 2
    double y2_s2 = 0.0;  // treatment-2 mean, study 2
    std::int64_t m10 = 0, m11 = 0, m20 = 0, m22 = 0;
    double sigma2 = 1.0;

    void validate() const;
    std::int64_t total_m() const noexcept { return m10 + m11 + m20 + m22; }
    bool balanced() const noexcept { return m10 == m11 && m10 == m20 && m10 == m22; }
};

// Pooled (eta0, eta1, eta2) estimate with scaled covariance obtained by
// propagating the independent group means through the contrast map.
Estimate aggregate_historical(const AnovaHistorical& h);

// Scaled covariance of the aggregated historical estimate for unit group
// fractions; equals sigma2 * [[2,-2,-2],[-2,6,2],[-2,2,6]] in the balanced
// equal-size case.
la::SymMatrix historical_sigma_balanced(double sigma2);

// Allocation fractions over the four current-study cells
// (neither, drug 1 only, drug 2 only, both).
struct DesignXi {
    double xi00 = 0.0, xi10 = 0.0, xi01 = 0.0, xi11 = 0.0;

    static DesignXi balanced() { return {0.25, 0.25, 0.25, 0.25}; }
    void validate() const;
    bool interior() const noexcept { return xi00 > 0 && xi10 > 0 && xi01 > 0 && xi11 > 0; }
};

// Scaled covariance of (theta~, eta~) under an interior design, p=1, q=3.
VarianceBlocks upsilon_of_design(const DesignXi& xi, double sigma2);

// Scaled variance of the plug-in estimator: sigma2 * (1 + 10 rho).
double var_theta_A(double rho, double sigma2 = 1.0);

// Scaled variance of the re-estimation estimator:
// sigma2/xi11 + 1^T (U_ee^-1 + (rho Sigma)^-1)^-1 1.
double var_theta_B(const DesignXi& xi, double rho, double sigma2 = 1.0);

// Scaled variance of the three-arm estimator (no control cell in the current
// study): sigma2/xi11 + 1^T (A^T V^-1 A + (rho Sigma)^-1)^-1 1.
double var_theta_D(double xi01, double xi10, double xi11, double rho, double sigma2 = 1.0);

struct OptimalDesign {
    DesignXi xi;
    double value = 0.0;
    bool xi00_at_floor = false;  // constraint xi00 >= floor active
    bool xi10_at_step = false;   // off-diagonal cells pinned at the grid step
};

// Grid search over symmetric designs (xi10 = xi01, xi00 = 1 - 2 xi10 - xi11)
// minimizing var_theta_B, subject to xi00 >= xi00_floor and xi10 >= step.
// Ties prefer larger xi11, then larger xi00. threads <= 0 uses the OpenMP
// default; the result is independent of the thread count.
OptimalDesign optimal_design(double rho, double step = 0.001, double xi00_floor = 0.02,
                             int threads = 0);
// plain-loop reference used by tests and benchmarks
OptimalDesign optimal_design_serial(double rho, double step = 0.001, double xi00_floor = 0.02);

struct Table1Row {
    std::int64_t n = 0, m = 0;
    double a_tt = 0.0, b_tt = 0.0;
};

// Plug-in vs re-estimation (balanced design) variances over a size grid.
std::vector<Table1Row> emit_table1(const std::vector<std::int64_t>& m_list,
                                   const std::vector<std::int64_t>& n_list, double sigma2 = 1.0);

struct Table2Row {
    double rho = 0.0;
    OptimalDesign design;
};

std::vector<Table2Row> emit_table2(const std::vector<double>& rhos, double step = 0.001,
                                   double xi00_floor = 0.02, int threads = 0);

std::string table1_csv(const std::vector<Table1Row>& rows);
std::string table2_csv(const std::vector<Table2Row>& rows);

}  // namespace histfuse::anova

#endif
