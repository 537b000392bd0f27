#include "histfuse/bliss.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "histfuse/format.hpp"

namespace histfuse::bliss {

void BlissInstance::validate() const {
    if (m1 < 1 || m2 < 1)
        throw DomainError("InvalidSizes", "historical sizes must be >= 1");
    if (n < 1)
        throw DomainError("InvalidSizes", "current budget must be >= 1");
    if (!(eta1_hat > 0.0 && eta1_hat < 1.0) || !(eta2_hat > 0.0 && eta2_hat < 1.0))
        throw DomainError("RangeError", "no-effect probabilities must lie strictly in (0,1)");
}

namespace {

double odds_rate(double p) { return (1.0 - p) / p; }

void check_alloc(const Allocation& a, const BlissInstance& inst) {
    if (a.n12 < 1)
        throw DomainError("InvalidDesign", "the combination arm needs at least one observation");
    if (a.n1 < 0 || a.n2 < 0)
        throw DomainError("InvalidDesign", "arm counts must be nonnegative");
    if (a.n12 + a.n1 + a.n2 != inst.n)
        throw DomainError("InvalidDesign", "allocation must exhaust the budget");
}

}  // namespace

double bliss_variance(const Allocation& alloc, const BlissInstance& inst, double theta) {
    inst.validate();
    check_alloc(alloc, inst);
    if (!(theta > 0.0 && theta < 1.0))
        throw DomainError("RangeError", "theta must lie strictly in (0,1)")
            .with("theta", std::to_string(theta));
    return odds_rate(theta) / static_cast<double>(alloc.n12) +
           odds_rate(inst.eta1_hat) / static_cast<double>(alloc.n1 + inst.m1) +
           odds_rate(inst.eta2_hat) / static_cast<double>(alloc.n2 + inst.m2);
}

Allocation greedy_allocate(const BlissInstance& inst) {
    return greedy_allocate(inst, inst.theta_independent());
}

Allocation greedy_allocate(const BlissInstance& inst, double theta) {
    inst.validate();
    if (!(theta > 0.0 && theta < 1.0))
        throw DomainError("RangeError", "theta must lie strictly in (0,1)");
    const double r12 = odds_rate(theta);
    const double r1 = odds_rate(inst.eta1_hat);
    const double r2 = odds_rate(inst.eta2_hat);

    // marginal change of 1/c -> 1/(c+1) in difference form, avoiding the
    // cancellation of subtracting two nearby reciprocals
    const auto drop = [](double rate, std::int64_t c) {
        return rate / (static_cast<double>(c) * static_cast<double>(c + 1));
    };

    Allocation a{1, 0, 0, 0.0};
    while (a.n12 + a.n1 + a.n2 < inst.n) {
        const double d12 = drop(r12, a.n12);
        const double d1 = drop(r1, a.n1 + inst.m1);
        const double d2 = drop(r2, a.n2 + inst.m2);
        const double best = std::max(d12, std::max(d1, d2));
        if (d12 >= best - 1e-15)
            ++a.n12;
        else if (d1 >= best - 1e-15)
            ++a.n1;
        else
            ++a.n2;
    }
    a.criterion = bliss_variance(a, inst, theta);
    return a;
}

NminResult find_nmin(std::int64_t m1, std::int64_t m2, double eta1_hat, double eta2_hat) {
    constexpr std::int64_t kCap = 1000000;
    BlissInstance inst{m1, m2, eta1_hat, eta2_hat, kCap};
    inst.validate();
    const double theta = inst.theta_independent();
    const double r12 = odds_rate(theta);
    const double r1 = odds_rate(eta1_hat);
    const double r2 = odds_rate(eta2_hat);
    // the greedy path is prefix-stable in the budget, so one walk suffices
    Allocation a{1, 0, 0, 0.0};
    while (a.n12 + a.n1 + a.n2 < kCap) {
        const double d12 = r12 / (static_cast<double>(a.n12) * static_cast<double>(a.n12 + 1));
        const double d1 = r1 / (static_cast<double>(a.n1 + m1) * static_cast<double>(a.n1 + m1 + 1));
        const double d2 = r2 / (static_cast<double>(a.n2 + m2) * static_cast<double>(a.n2 + m2 + 1));
        const double best = std::max(d12, std::max(d1, d2));
        if (d12 >= best - 1e-15) {
            ++a.n12;
            continue;
        }
        if (d1 >= best - 1e-15)
            ++a.n1;
        else
            ++a.n2;
        NminResult r;
        r.n_min = a.n12 + a.n1 + a.n2;
        r.alloc = a;
        BlissInstance at{m1, m2, eta1_hat, eta2_hat, r.n_min};
        r.alloc.criterion = bliss_variance(r.alloc, at, theta);
        return r;
    }
    throw DomainError("NoReplicationNeeded", "no budget up to 1e6 tops up a historical arm");
}

std::vector<Table3Row> emit_table3(const std::vector<GridEntry>& grid) {
    std::vector<Table3Row> rows;
    rows.reserve(grid.size());
    for (const GridEntry& g : grid)
        rows.push_back({g.m1, g.m2, g.eta1, g.eta2, find_nmin(g.m1, g.m2, g.eta1, g.eta2)});
    return rows;
}

std::vector<GridEntry> default_grid() {
    std::vector<GridEntry> grid;
    const auto block = [&grid](double e1, double e2, std::initializer_list<std::pair<int, int>> ms) {
        for (const auto& [m1, m2] : ms) grid.push_back({m1, m2, e1, e2});
    };
    block(0.3, 0.3, {{10, 10}, {20, 10}, {30, 10}});
    block(0.3, 0.5, {{10, 10}, {20, 10}, {30, 10}, {10, 20}, {10, 30}});
    block(0.3, 0.7, {{10, 10}, {10, 20}, {10, 30}, {20, 10}, {30, 10}});
    block(0.3, 0.9, {{10, 10}, {10, 20}, {10, 30}, {20, 10}, {30, 10}});
    block(0.5, 0.7, {{10, 10}, {10, 20}, {10, 30}, {20, 10}, {30, 10}});
    block(0.5, 0.9, {{10, 10}, {10, 20}, {10, 30}, {20, 10}, {30, 10}});
    block(0.7, 0.7, {{10, 10}, {20, 10}, {30, 10}});
    block(0.7, 0.9, {{10, 10}, {20, 10}, {30, 10}, {10, 20}, {10, 30}});
    return grid;
}

std::string table3_csv(const std::vector<Table3Row>& rows) {
    std::ostringstream out;
    out << "m1,m2,eta1,eta2,n_min,n12,n1,n2\n";
    for (const Table3Row& r : rows)
        out << r.m1 << ',' << r.m2 << ',' << format_double(r.eta1) << ',' << format_double(r.eta2)
            << ',' << r.result.n_min << ',' << r.result.alloc.n12 << ',' << r.result.alloc.n1
            << ',' << r.result.alloc.n2 << '\n';
    return out.str();
}

}  // namespace histfuse::bliss
