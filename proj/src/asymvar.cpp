#include "histfuse/asymvar.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "histfuse/fusion.hpp"

namespace histfuse {

void ProblemSpec::validate() const {
    if (d_theta.rows() != d_theta.cols())
        throw DomainError("DimMismatch", "d_theta must be square");
    if (d_eta.rows() != p() || sigma_psi.dim() != p() || sigma.dim() != q())
        throw DomainError("DimMismatch", "problem spec blocks are not conformable");
    if (upsilon_ee && upsilon_ee->dim() != q())
        throw DomainError("DimMismatch", "upsilon_ee dimension mismatch");
    if (la::lu_condition_estimate(d_theta) > 1e12)
        throw DomainError("SingularDTheta", "d_theta condition estimate exceeds 1e12");
    if (!la::is_positive_definite(sigma_psi))
        throw DomainError("NotPD", "sigma_psi is not positive definite");
    if (!la::is_positive_definite(sigma))
        throw DomainError("NotPD", "sigma is not positive definite");
    if (upsilon_ee && !la::is_positive_definite(*upsilon_ee))
        throw DomainError("NotPD", "upsilon_ee is not positive definite");
    if (rho < 0.0)
        throw DomainError("RangeError", "rho must be nonnegative").with("rho", std::to_string(rho));
}

namespace {

// Shared block structure of the plug-in and re-estimation variances: given the
// scaled eta noise N,
//   tt = D_t^-1 [Sigma_psi + D_e N D_e^T] D_t^-T,
//   te = -D_t^-1 D_e N,   ee = N.
VarianceBlocks variance_from_eta_noise(const ProblemSpec& spec, const la::SymMatrix& noise) {
    const la::Matrix dt_inv_de = la::lu_solve(spec.d_theta, spec.d_eta);
    const la::Matrix penalty = dt_inv_de * noise.mat() * dt_inv_de.transpose();
    const la::Matrix base = la::lu_solve(
        spec.d_theta, la::lu_solve(spec.d_theta, spec.sigma_psi.mat()).transpose());
    la::SymMatrix tt = la::SymMatrix::from_matrix(base + penalty, 1e-9);
    la::Matrix te = dt_inv_de * noise.mat() * -1.0;
    return VarianceBlocks(std::move(tt), std::move(te), noise);
}

}  // namespace

VarianceBlocks variance_A(const ProblemSpec& spec) {
    spec.validate();
    return variance_from_eta_noise(spec, spec.sigma * spec.rho);
}

la::SymMatrix fused_eta_noise(const la::SymMatrix& upsilon_ee, const la::SymMatrix& sigma,
                              double rho) {
    if (upsilon_ee.dim() != sigma.dim())
        throw DomainError("DimMismatch", "eta noise inputs must share dimension");
    if (!(rho > 0.0))
        throw DomainError("RangeError", "rho must be positive").with("rho", std::to_string(rho));
    const la::Matrix sum = la::invert(upsilon_ee).mat() + la::invert(sigma * rho).mat();
    return la::invert(la::SymMatrix::from_matrix(sum, 1e-9));
}

VarianceBlocks variance_B(const ProblemSpec& spec) {
    spec.validate();
    if (!spec.upsilon_ee)
        throw DomainError("MissingUpsilon", "re-estimation variance requires upsilon_ee");
    if (spec.rho <= 1e-300) {
        // degenerate limit: the fused noise vanishes with rho
        return variance_from_eta_noise(spec, la::SymMatrix(spec.q()));
    }
    return variance_from_eta_noise(spec, fused_eta_noise(*spec.upsilon_ee, spec.sigma, spec.rho));
}

VarianceBlocks variance_C(const VarianceBlocks& upsilon, const la::SymMatrix& sigma, double rho) {
    if (upsilon.q() != sigma.dim())
        throw DomainError("DimMismatch", "upsilon and sigma eta dims differ");
    if (!la::is_positive_definite(upsilon.assemble()))
        throw DomainError("NotPD", "upsilon must be positive definite");
    if (!la::is_positive_definite(sigma))
        throw DomainError("NotPD", "sigma must be positive definite");

    const double gamma = rho / (1.0 + rho);
    const auto [w1, w2] = fusion_weights(upsilon.ee, sigma, gamma);
    const la::Matrix u_ee_inv = la::invert(upsilon.ee).mat();

    la::SymMatrix tt = la::SymMatrix::from_matrix(
        upsilon.tt.mat() - upsilon.te * u_ee_inv * w2 * upsilon.te.transpose(), 1e-9);
    la::Matrix te = upsilon.te * w1;
    la::SymMatrix ee = fused_eta_noise(upsilon.ee, sigma, rho);
    VarianceBlocks c(std::move(tt), std::move(te), std::move(ee));

#ifndef NDEBUG
    const VarianceBlocks check = variance_C_product(upsilon, sigma, rho);
    const double scale = std::max(c.assemble().max_abs(), 1e-300);
    assert((c.assemble() - check.assemble()).max_abs() <= 1e-9 * scale);
#endif
    return c;
}

VarianceBlocks variance_C_product(const VarianceBlocks& upsilon, const la::SymMatrix& sigma,
                                  double rho) {
    const std::size_t p = upsilon.p();
    const std::size_t q = upsilon.q();
    const double gamma = rho / (1.0 + rho);
    const auto [w1, w2] = fusion_weights(upsilon.ee, sigma, gamma);
    const la::Matrix r = la::solve_spd(upsilon.ee, upsilon.te.transpose()).transpose();
    const la::Matrix rw2 = r * w2;

    la::Matrix m(p + q, p + 2 * q);
    for (std::size_t i = 0; i < p; ++i) {
        m(i, i) = 1.0;
        for (std::size_t j = 0; j < q; ++j) {
            m(i, p + j) = -rw2(i, j);
            m(i, p + q + j) = rw2(i, j);
        }
    }
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            m(p + i, p + j) = w1(i, j);
            m(p + i, p + q + j) = w2(i, j);
        }

    la::Matrix v(p + 2 * q, p + 2 * q);
    const la::SymMatrix u = upsilon.assemble();
    for (std::size_t i = 0; i < p + q; ++i)
        for (std::size_t j = 0; j < p + q; ++j) v(i, j) = u(i, j);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) v(p + q + i, p + q + j) = rho * sigma(i, j);

    const la::SymMatrix c = la::SymMatrix::from_matrix(m * v * m.transpose(), 1e-9);
    return VarianceBlocks::split(c, p);
}

la::SymMatrix delta_variance(const VarianceBlocks& v, const la::Matrix& jacobian) {
    const la::SymMatrix assembled = v.assemble();
    if (jacobian.cols() != assembled.dim())
        throw DomainError("DimMismatch", "jacobian columns must match p+q");
    return la::SymMatrix::from_matrix(jacobian * assembled.mat() * jacobian.transpose(), 1e-9);
}

HierarchyReport compare_hierarchy(const VarianceBlocks& a, const VarianceBlocks& b,
                                  const VarianceBlocks& c, const VarianceBlocks& upsilon,
                                  double tol) {
    if (a.p() != b.p() || a.q() != b.q() || a.p() != c.p() || a.q() != c.q() ||
        a.p() != upsilon.p() || a.q() != upsilon.q())
        throw DomainError("DimMismatch", "hierarchy inputs must share block dims");
    HierarchyReport rep;
    rep.tol = tol;
    rep.b_leq_a = la::loewner_leq(b.assemble(), a.assemble(), tol);
    rep.c_leq_upsilon = la::loewner_leq(c.assemble(), upsilon.assemble(), tol);
    rep.b_leq_c = la::loewner_leq(b.assemble(), c.assemble(), tol);
    return rep;
}

std::pair<bool, bool> theorem6_preconditions(const la::Matrix& d_theta_psi,
                                             const la::Matrix& d_eta_psi,
                                             const la::Matrix& d_theta_lam,
                                             const la::Matrix& d_eta_lam,
                                             const la::SymMatrix& sandwich_psi,
                                             const la::SymMatrix& sandwich_lam) {
    if (d_eta_psi.rows() != d_theta_psi.rows() || d_eta_lam.rows() != d_theta_lam.rows() ||
        d_eta_psi.cols() != d_eta_lam.cols())
        throw DomainError("DimMismatch", "sensitivity matrices are not conformable");
    la::Matrix s_psi, s_lam;
    try {
        s_psi = la::lu_solve(d_theta_psi, d_eta_psi);
        s_lam = la::lu_solve(d_theta_lam, d_eta_lam);
    } catch (const DomainError&) {
        throw DomainError("SingularDTheta", "sensitivity comparison requires invertible d_theta");
    }
    bool componentwise = true;
    for (std::size_t i = 0; i < s_psi.rows() && componentwise; ++i)
        for (std::size_t j = 0; j < s_psi.cols(); ++j)
            if (s_psi(i, j) > s_lam(i, j) + 1e-12 * std::max(s_lam.max_abs(), 1.0)) {
                componentwise = false;
                break;
            }
    const bool efficient = la::loewner_leq(sandwich_psi, sandwich_lam, 1e-9);
    return {componentwise, efficient};
}

}  // namespace histfuse
