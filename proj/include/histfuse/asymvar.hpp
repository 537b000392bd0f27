#ifndef HISTFUSE_ASYMVAR_HPP
#define HISTFUSE_ASYMVAR_HPP

#include <optional>
#include <utility>

#include "histfuse/blocks.hpp"

namespace histfuse {

// Inputs to the asymptotic variance constructions: sensitivity matrices of
// the estimating function, its second moment, the assembled historical
// covariance, and the sampling ratio rho = lim n/m.
struct ProblemSpec {
    la::Matrix d_theta;   // p x p, invertible
    la::Matrix d_eta;     // p x q
    la::SymMatrix sigma_psi;  // p x p
    la::SymMatrix sigma;      // q x q
    std::optional<la::SymMatrix> upsilon_ee;  // q x q, required for the re-estimation variance
    double rho = 0.0;

    std::size_t p() const noexcept { return d_theta.rows(); }
    std::size_t q() const noexcept { return d_eta.cols(); }
    void validate() const;
};

// Plug-in variance: the historical estimates enter fixed, so the eta noise is
// rho * Sigma and the theta block picks up the plug-in penalty
// D_theta^-1 [Sigma_psi + rho D_eta Sigma D_eta^T] D_theta^-T.
VarianceBlocks variance_A(const ProblemSpec& spec);

// Re-estimation variance: identical structure with rho * Sigma replaced by
// the fused eta noise F = (Upsilon_ee^-1 + (rho Sigma)^-1)^-1 in all blocks.
VarianceBlocks variance_B(const ProblemSpec& spec);

// Fused eta noise F shared by the re-estimation and summary-fusion variances.
la::SymMatrix fused_eta_noise(const la::SymMatrix& upsilon_ee, const la::SymMatrix& sigma,
                              double rho);

// Summary-fusion variance, closed-form blocks:
//   C_tt = U_tt - U_te U_ee^-1 W2 U_te^T,  C_te = U_te W1,  C_ee = F.
VarianceBlocks variance_C(const VarianceBlocks& upsilon, const la::SymMatrix& sigma, double rho);

// Same matrix through the sandwich route C = M V M^T with
// V = BlockDiag(U, rho Sigma) and M = [[I, -R W2, R W2], [0, W1, W2]],
// R = U_te U_ee^-1. Kept as an independent arithmetic path for verification.
VarianceBlocks variance_C_product(const VarianceBlocks& upsilon, const la::SymMatrix& sigma,
                                  double rho);

// Variance of a derived functional with Jacobian P (r x (p+q)): P V P^T.
la::SymMatrix delta_variance(const VarianceBlocks& v, const la::Matrix& jacobian);

// Loewner-order dominance report among the three constructions and the
// current-study-only variance. The B vs C ordering is reported, never
// asserted: its sufficient conditions may fail.
struct HierarchyReport {
    bool b_leq_a = false;
    bool c_leq_upsilon = false;
    bool b_leq_c = false;
    double tol = 0.0;
};

HierarchyReport compare_hierarchy(const VarianceBlocks& a, const VarianceBlocks& b,
                                  const VarianceBlocks& c, const VarianceBlocks& upsilon,
                                  double tol = 1e-9);

// Sufficient conditions for B <= C: (i) componentwise sensitivity ordering
// D_t(psi)^-1 D_e(psi) <= D_t(lam)^-1 D_e(lam), (ii) sandwich(psi) Loewner-
// below sandwich(lam).
std::pair<bool, bool> theorem6_preconditions(const la::Matrix& d_theta_psi,
                                             const la::Matrix& d_eta_psi,
                                             const la::Matrix& d_theta_lam,
                                             const la::Matrix& d_eta_lam,
                                             const la::SymMatrix& sandwich_psi,
                                             const la::SymMatrix& sandwich_lam);

}  // namespace histfuse

#endif
