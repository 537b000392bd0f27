#include "histfuse/fusion.hpp"

#include <cmath>
#include <string>

#include "histfuse/asymvar.hpp"

namespace histfuse {

std::pair<la::Matrix, la::Matrix> fusion_weights(const la::SymMatrix& upsilon_ee,
                                                 const la::SymMatrix& sigma, double gamma) {
    if (upsilon_ee.dim() != sigma.dim())
        throw DomainError("DimMismatch", "weight inputs must share dimension");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError("GammaOutOfRange", "gamma must lie strictly in (0,1)")
            .with("gamma", std::to_string(gamma));
    const la::Matrix u_inv = la::invert(upsilon_ee).mat();
    const la::Matrix s_inv = la::invert(sigma).mat();
    const la::SymMatrix precision =
        la::SymMatrix::from_matrix(u_inv * gamma + s_inv * (1.0 - gamma), 1e-9);
    la::Matrix w1 = la::solve_spd(precision, u_inv * gamma);
    la::Matrix w2 = la::solve_spd(precision, s_inv * (1.0 - gamma));
    return {std::move(w1), std::move(w2)};
}

Estimate combine_eta(const Estimate& current, const HistoricalSet& historical) {
    if (current.dim() != historical.q())
        throw DomainError("DimMismatch", "current and historical eta dims differ");
    const double n = static_cast<double>(current.n);
    const double m = static_cast<double>(historical.total_m());
    const la::SymMatrix sigma = historical.assembled_sigma();
    const la::Matrix u_inv = la::invert(current.scaled_var).mat();
    const la::Matrix s_inv = la::invert(sigma).mat();
    const la::SymMatrix precision = la::SymMatrix::from_matrix(u_inv * n + s_inv * m, 1e-9);

    std::vector<double> rhs = u_inv * current.value;
    const std::vector<double> hist_part = s_inv * historical.assembled_eta();
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = n * rhs[i] + m * hist_part[i];
    std::vector<double> fused = la::solve_spd(precision, rhs);

    const double rho = n / m;
    la::SymMatrix scaled_var = fused_eta_noise(current.scaled_var, sigma, rho);
    return Estimate(std::move(fused), std::move(scaled_var), current.n);
}

JointEstimate combine_theta_C(const JointEstimate& joint, const HistoricalSet& historical) {
    if (joint.eta.size() != historical.q())
        throw DomainError("DimMismatch", "joint eta and historical dims differ");
    const Estimate current_eta(joint.eta, joint.upsilon.ee, joint.n);
    const Estimate eta_bar = combine_eta(current_eta, historical);

    const double rho =
        static_cast<double>(joint.n) / static_cast<double>(historical.total_m());
    VarianceBlocks c = variance_C(joint.upsilon, historical.assembled_sigma(), rho);

    if (joint.upsilon.te.all_zero()) {
        // no covariance channel: theta passes through untouched
        return JointEstimate(joint.theta, eta_bar.value, std::move(c), joint.n);
    }

    std::vector<double> gap(joint.eta.size());
    for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = joint.eta[i] - eta_bar.value[i];
    const std::vector<double> adj = joint.upsilon.te * la::solve_spd(joint.upsilon.ee, gap);
    std::vector<double> theta = joint.theta;
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= adj[i];
    return JointEstimate(std::move(theta), eta_bar.value, std::move(c), joint.n);
}

double scalar_efficiency(double r, double w2) {
    if (std::fabs(r) > 1.0)
        throw DomainError("RangeError", "correlation must lie in [-1,1]").with("r", std::to_string(r));
    if (w2 < 0.0 || w2 > 1.0)
        throw DomainError("RangeError", "weight must lie in [0,1]").with("w2", std::to_string(w2));
    return 1.0 - w2 * r * r;
}

}  // namespace histfuse
