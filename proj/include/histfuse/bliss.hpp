#ifndef HISTFUSE_BLISS_HPP
#define HISTFUSE_BLISS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "histfuse/errors.hpp"

// Single-dose drug-interaction design: allocate a current budget across the
// combination arm and the two single-drug arms (which top up historical
// binomial experiments) to minimize the large-sample variance of
// log(theta) - log(eta1) - log(eta2).

namespace histfuse::bliss {

struct BlissInstance {
    std::int64_t m1 = 0, m2 = 0;    // historical binomial sizes
    double eta1_hat = 0.0, eta2_hat = 0.0;  // historical no-effect probability estimates
    std::int64_t n = 0;             // current-study budget

    void validate() const;
    // plug-in combination no-effect probability under independence
    double theta_independent() const noexcept { return eta1_hat * eta2_hat; }
};

struct Allocation {
    std::int64_t n12 = 0, n1 = 0, n2 = 0;
    double criterion = 0.0;
};

// Large-sample variance of the log-interaction measure at the plug-in
// parameter values:
//   (1/n12)(1-theta)/theta + (1/(n1+m1))(1-eta1)/eta1 + (1/(n2+m2))(1-eta2)/eta2.
double bliss_variance(const Allocation& alloc, const BlissInstance& inst, double theta);

// Greedy minimization: start from (1,0,0) and repeatedly add one observation
// to the arm with the most negative marginal criterion change. Exact ties
// (within 1e-15) resolve by fixed priority n12 > n1 > n2.
Allocation greedy_allocate(const BlissInstance& inst);
// theta override for sensitivity analysis (default is eta1_hat * eta2_hat)
Allocation greedy_allocate(const BlissInstance& inst, double theta);

struct NminResult {
    std::int64_t n_min = 0;
    Allocation alloc;
};

// Smallest budget at which the greedy allocation first tops up a historical
// arm, found by walking the (budget-independent) greedy path. Budgets are
// capped at 1e6.
NminResult find_nmin(std::int64_t m1, std::int64_t m2, double eta1_hat, double eta2_hat);

struct Table3Row {
    std::int64_t m1 = 0, m2 = 0;
    double eta1 = 0.0, eta2 = 0.0;
    NminResult result;
};

struct GridEntry {
    std::int64_t m1 = 0, m2 = 0;
    double eta1 = 0.0, eta2 = 0.0;
};

std::vector<Table3Row> emit_table3(const std::vector<GridEntry>& grid);
// the default probability/size grid used by the table emitter
std::vector<GridEntry> default_grid();

std::string table3_csv(const std::vector<Table3Row>& rows);

}  // namespace histfuse::bliss

#endif
