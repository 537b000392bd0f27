#ifndef HISTFUSE_ESTIMATES_HPP
#define HISTFUSE_ESTIMATES_HPP

#include <cstdint>
#include <vector>

#include "histfuse/blocks.hpp"
#include "histfuse/matrix.hpp"

namespace histfuse {

// A point estimate with its scaled asymptotic variance (variance times the
// sample size behind the estimate).
struct Estimate {
    std::vector<double> value;
    la::SymMatrix scaled_var;
    std::int64_t n = 0;

    Estimate() = default;
    Estimate(std::vector<double> value_, la::SymMatrix scaled_var_, std::int64_t n_);
    std::size_t dim() const noexcept { return value.size(); }
};

// Joint (theta, eta) estimate from a single study of size n with scaled
// variance blocks.
struct JointEstimate {
    std::vector<double> theta;
    std::vector<double> eta;
    VarianceBlocks upsilon;
    std::int64_t n = 0;

    JointEstimate() = default;
    JointEstimate(std::vector<double> theta_, std::vector<double> eta_, VarianceBlocks upsilon_,
                  std::int64_t n_);
};

// An ordered collection of independent historical estimates. The assembled
// covariance is BlockDiag(kappa_j * Sigma_j) with kappa_j = total_m / n_j.
class HistoricalSet {
public:
    HistoricalSet(std::vector<Estimate> estimates, std::int64_t total_m);
    static HistoricalSet single(Estimate e);

    const std::vector<Estimate>& estimates() const noexcept { return estimates_; }
    std::int64_t total_m() const noexcept { return total_m_; }
    std::size_t q() const noexcept { return q_; }

    std::vector<double> assembled_eta() const;
    la::SymMatrix assembled_sigma() const;

private:
    std::vector<Estimate> estimates_;
    std::int64_t total_m_ = 0;
    std::size_t q_ = 0;
};

}  // namespace histfuse

#endif
