#ifndef HISTFUSE_FUSION_HPP
#define HISTFUSE_FUSION_HPP

#include <utility>

#include "histfuse/estimates.hpp"

namespace histfuse {

// Precision-proportional weight matrices combining the current and historical
// eta estimates:
//   W1 = (g U^-1 + (1-g) S^-1)^-1 g U^-1,
//   W2 = (g U^-1 + (1-g) S^-1)^-1 (1-g) S^-1,
// g in (0,1). They satisfy W1 + W2 = I.
std::pair<la::Matrix, la::Matrix> fusion_weights(const la::SymMatrix& upsilon_ee,
                                                 const la::SymMatrix& sigma, double gamma);

// Precision-weighted fusion of the current eta estimate with the assembled
// historical estimate,
//   eta_bar = (n U^-1 + m S^-1)^-1 (n U^-1 eta_tilde + m S^-1 eta_hat),
// solved as a linear system. The returned estimate carries the scaled
// variance (U^-1 + (rho S)^-1)^-1 at the current-study size n, rho = n/m.
Estimate combine_eta(const Estimate& current, const HistoricalSet& historical);

// Summary-level fusion of a joint (theta, eta) estimate with historical eta
// estimates: theta_bar = theta_tilde - U_te U_ee^-1 (eta_tilde - eta_bar).
// When U_te is exactly zero, theta_tilde is returned untouched. The attached
// variance blocks are the summary-fusion asymptotic variance.
JointEstimate combine_theta_C(const JointEstimate& joint, const HistoricalSet& historical);

// Asymptotic relative efficiency of the fused scalar estimator: 1 - w2 r^2.
double scalar_efficiency(double r, double w2);

}  // namespace histfuse

#endif
