#include "histfuse/estimates.hpp"

#include <string>

namespace histfuse {

VarianceBlocks::VarianceBlocks(la::SymMatrix tt_, la::Matrix te_, la::SymMatrix ee_)
    : tt(std::move(tt_)), te(std::move(te_)), ee(std::move(ee_)) {
    if (te.rows() != tt.dim() || te.cols() != ee.dim())
        throw DomainError("DimMismatch", "variance blocks are not conformable");
}

VarianceBlocks VarianceBlocks::split(const la::SymMatrix& m, std::size_t p) {
    if (p < 1 || p >= m.dim())
        throw DomainError("DimMismatch", "split point outside matrix");
    const std::size_t q = m.dim() - p;
    la::SymMatrix tt(p), ee(q);
    la::Matrix te(p, q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) tt.set(i, j, m(i, j));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) te(i, j) = m(i, p + j);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i; j < q; ++j) ee.set(i, j, m(p + i, p + j));
    return VarianceBlocks(std::move(tt), std::move(te), std::move(ee));
}

void VarianceBlocks::validate_psd(double tol) const {
    const la::SymMatrix m = assemble();
    const double scale = std::max(m.max_abs(), 1e-300);
    const double lo = la::min_eigenvalue(m);
    if (lo < -tol * scale)
        throw DomainError("NotPSD", "assembled variance matrix has a negative eigenvalue")
            .with("min_eigenvalue", std::to_string(lo));
}

Estimate::Estimate(std::vector<double> value_, la::SymMatrix scaled_var_, std::int64_t n_)
    : value(std::move(value_)), scaled_var(std::move(scaled_var_)), n(n_) {
    if (value.size() != scaled_var.dim())
        throw DomainError("DimMismatch", "estimate value and variance dims differ");
    if (n < 1) throw DomainError("InvalidSizes", "sample size must be positive");
    if (!la::is_positive_definite(scaled_var))
        throw DomainError("NotPD", "estimate scaled variance is not positive definite");
}

JointEstimate::JointEstimate(std::vector<double> theta_, std::vector<double> eta_,
                             VarianceBlocks upsilon_, std::int64_t n_)
    : theta(std::move(theta_)), eta(std::move(eta_)), upsilon(std::move(upsilon_)), n(n_) {
    if (theta.size() != upsilon.p() || eta.size() != upsilon.q())
        throw DomainError("DimMismatch", "joint estimate dims do not match variance blocks");
    if (n < 1) throw DomainError("InvalidSizes", "sample size must be positive");
    if (!la::is_positive_definite(upsilon.assemble()))
        throw DomainError("NotPD", "joint scaled variance is not positive definite");
}

HistoricalSet::HistoricalSet(std::vector<Estimate> estimates, std::int64_t total_m)
    : estimates_(std::move(estimates)), total_m_(total_m) {
    if (estimates_.empty())
        throw DomainError("InvalidSizes", "historical set must contain at least one estimate");
    std::int64_t sum = 0;
    for (const Estimate& e : estimates_) {
        sum += e.n;
        q_ += e.dim();
    }
    if (sum != total_m_)
        throw DomainError("InvalidSizes", "total_m must equal the sum of member sample sizes")
            .with("total_m", std::to_string(total_m_))
            .with("sum", std::to_string(sum));
}

HistoricalSet HistoricalSet::single(Estimate e) {
    const std::int64_t m = e.n;
    return HistoricalSet(std::vector<Estimate>{std::move(e)}, m);
}

std::vector<double> HistoricalSet::assembled_eta() const {
    std::vector<double> eta;
    eta.reserve(q_);
    for (const Estimate& e : estimates_)
        eta.insert(eta.end(), e.value.begin(), e.value.end());
    return eta;
}

la::SymMatrix HistoricalSet::assembled_sigma() const {
    la::SymMatrix sigma(q_);
    std::size_t off = 0;
    for (const Estimate& e : estimates_) {
        const double kappa = static_cast<double>(total_m_) / static_cast<double>(e.n);
        for (std::size_t i = 0; i < e.dim(); ++i)
            for (std::size_t j = i; j < e.dim(); ++j)
                sigma.set(off + i, off + j, kappa * e.scaled_var(i, j));
        off += e.dim();
    }
    return sigma;
}

}  // namespace histfuse
