#include "histfuse/anova.hpp"

#include <cmath>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "histfuse/asymvar.hpp"
#include "histfuse/format.hpp"

namespace histfuse::anova {

void AnovaHistorical::validate() const {
    if (m10 < 1 || m11 < 1 || m20 < 1 || m22 < 1)
        throw DomainError("InvalidSizes", "all historical group sizes must be >= 1");
    if (!(sigma2 > 0.0))
        throw DomainError("RangeError", "sigma2 must be positive");
}

Estimate aggregate_historical(const AnovaHistorical& h) {
    h.validate();
    const double m = static_cast<double>(h.total_m());
    const double w1 = static_cast<double>(h.m10) / static_cast<double>(h.m10 + h.m20);
    const double w2 = 1.0 - w1;

    const double eta0 = w1 * h.y0_s1 + w2 * h.y0_s2;
    const double eta1 = h.y1_s1 - eta0;
    const double eta2 = h.y2_s2 - eta0;

    // contrast map from the four independent group means
    // (y0_s1, y1_s1, y0_s2, y2_s2) to (eta0, eta1, eta2)
    const la::Matrix j(3, 4,
                       {w1, 0.0, w2, 0.0,
                        -w1, 1.0, -w2, 0.0,
                        -w1, 0.0, -w2, 1.0});
    const la::SymMatrix mean_vars = la::SymMatrix::diagonal(
        {m * h.sigma2 / h.m10, m * h.sigma2 / h.m11, m * h.sigma2 / h.m20,
         m * h.sigma2 / h.m22});
    la::SymMatrix scaled =
        la::SymMatrix::from_matrix(j * mean_vars.mat() * j.transpose(), 1e-9);
    return Estimate({eta0, eta1, eta2}, std::move(scaled), h.total_m());
}

la::SymMatrix historical_sigma_balanced(double sigma2) {
    return sigma2 * la::SymMatrix(3, {2, -2, -2, -2, 6, 2, -2, 2, 6});
}

void DesignXi::validate() const {
    if (xi00 < 0 || xi10 < 0 || xi01 < 0 || xi11 < 0)
        throw DomainError("InvalidDesign", "allocation fractions must be nonnegative");
    if (!(xi11 > 0))
        throw DomainError("InvalidDesign", "the combination cell fraction must be positive");
    const double sum = xi00 + xi10 + xi01 + xi11;
    if (std::fabs(sum - 1.0) > 1e-9)
        throw DomainError("InvalidDesign", "allocation fractions must sum to one")
            .with("sum", std::to_string(sum));
}

VarianceBlocks upsilon_of_design(const DesignXi& xi, double sigma2) {
    xi.validate();
    if (!xi.interior())
        throw DomainError("BoundaryDesign", "all four cells need positive mass for an invertible variance");
    // contrasts of the four cell means (y00, y10, y01, y11):
    // theta~ = y11 - y10 - y01 + y00, eta0~ = y00,
    // eta1~ = y10 - y00, eta2~ = y01 - y00
    const la::Matrix j(4, 4,
                       {1, -1, -1, 1,
                        1, 0, 0, 0,
                        -1, 1, 0, 0,
                        -1, 0, 1, 0});
    const la::SymMatrix cell = la::SymMatrix::diagonal(
        {sigma2 / xi.xi00, sigma2 / xi.xi10, sigma2 / xi.xi01, sigma2 / xi.xi11});
    const la::SymMatrix full = la::SymMatrix::from_matrix(j * cell.mat() * j.transpose(), 1e-9);
    return VarianceBlocks::split(full, 1);
}

double var_theta_A(double rho, double sigma2) {
    if (rho < 0.0) throw DomainError("RangeError", "rho must be nonnegative");
    return sigma2 * (1.0 + 10.0 * rho);
}

namespace {

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

double one_fused_one(const la::SymMatrix& upsilon_ee, const la::SymMatrix& sigma, double rho) {
    const la::SymMatrix f = fused_eta_noise(upsilon_ee, sigma, rho);
    const std::vector<double> o = ones(3);
    const std::vector<double> fo = f * o;
    return fo[0] + fo[1] + fo[2];
}

}  // namespace

double var_theta_B(const DesignXi& xi, double rho, double sigma2) {
    const VarianceBlocks upsilon = upsilon_of_design(xi, sigma2);
    if (rho <= 1e-300) return sigma2 / xi.xi11;
    return sigma2 / xi.xi11 + one_fused_one(upsilon.ee, historical_sigma_balanced(sigma2), rho);
}

double var_theta_D(double xi01, double xi10, double xi11, double rho, double sigma2) {
    if (!(xi01 > 0) || !(xi10 > 0) || !(xi11 > 0))
        throw DomainError("InvalidDesign", "three-arm design needs positive cell fractions");
    if (std::fabs(xi01 + xi10 + xi11 - 1.0) > 1e-9)
        throw DomainError("InvalidDesign", "three-arm fractions must sum to one");
    // E(S) = A eta for the two single-drug arm means
    const la::Matrix a(2, 3, {1, 1, 0, 1, 0, 1});
    const la::SymMatrix v = la::SymMatrix::diagonal({sigma2 / xi01, sigma2 / xi10});
    const la::Matrix gram = a.transpose() * la::invert(v).mat() * a;
    const la::Matrix precision =
        gram + la::invert(historical_sigma_balanced(sigma2) * rho).mat();
    const std::vector<double> x =
        la::solve_spd(la::SymMatrix::from_matrix(precision, 1e-9), ones(3));
    return sigma2 / xi11 + x[0] + x[1] + x[2];
}

namespace {

struct GridPoint {
    double value = 0.0;
    double xi10 = 0.0, xi11 = 0.0;
    bool valid = false;
};

// tie preference: smaller value, then larger xi11, then larger xi00
// (equivalently smaller xi10 at fixed xi11)
bool better(const GridPoint& a, const GridPoint& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.value != b.value) return a.value < b.value;
    if (a.xi11 != b.xi11) return a.xi11 > b.xi11;
    return a.xi10 < b.xi10;
}

GridPoint scan_row(double step, double xi00_floor, int i10,
                   const la::SymMatrix& hist_prec_rho) {
    GridPoint best;
    const double xi10 = i10 * step;
    const int max_i11 = static_cast<int>(std::floor((1.0 - 2.0 * xi10 - xi00_floor) / step + 1e-9));
    for (int i11 = 1; i11 <= max_i11; ++i11) {
        const double xi11 = i11 * step;
        const double xi00 = 1.0 - 2.0 * xi10 - xi11;
        if (xi00 < xi00_floor - 1e-12) break;
        const DesignXi xi{xi00, xi10, xi10, xi11};
        const VarianceBlocks upsilon = upsilon_of_design(xi, 1.0);
        const la::Matrix precision = la::invert(upsilon.ee).mat() + hist_prec_rho.mat();
        const std::vector<double> x =
            la::solve_spd(la::SymMatrix::from_matrix(precision, 1e-9), ones(3));
        const GridPoint cand{1.0 / xi11 + x[0] + x[1] + x[2], xi10, xi11, true};
        if (better(cand, best)) best = cand;
    }
    return best;
}

OptimalDesign reduce_rows(const std::vector<GridPoint>& rows, double step, double xi00_floor) {
    GridPoint best;
    for (const GridPoint& r : rows)
        if (better(r, best)) best = r;
    if (!best.valid)
        throw DomainError("EmptyGrid", "no feasible design on the grid");
    OptimalDesign od;
    od.xi = DesignXi{1.0 - 2.0 * best.xi10 - best.xi11, best.xi10, best.xi10, best.xi11};
    od.value = best.value;
    od.xi00_at_floor = od.xi.xi00 <= xi00_floor + step / 2.0;
    od.xi10_at_step = od.xi.xi10 <= step * 1.5;
    return od;
}

int max_row_index(double step, double xi00_floor) {
    // need xi10 >= step, xi11 >= step, xi00 >= floor
    return static_cast<int>(std::floor((1.0 - xi00_floor - step) / (2.0 * step) + 1e-9));
}

void check_grid_args(double rho, double step) {
    if (!(rho > 0.0)) throw DomainError("RangeError", "rho must be positive");
    if (!(step > 0.0 && step < 1.0)) throw DomainError("RangeError", "step must lie in (0,1)");
}

}  // namespace

OptimalDesign optimal_design(double rho, double step, double xi00_floor, int threads) {
    check_grid_args(rho, step);
    const la::SymMatrix hist_prec_rho = la::invert(historical_sigma_balanced(1.0) * rho);
    const int rows = max_row_index(step, xi00_floor);
    if (rows < 1) throw DomainError("EmptyGrid", "no feasible design on the grid");
    std::vector<GridPoint> row_best(rows);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (int i10 = 1; i10 <= rows; ++i10)
        row_best[i10 - 1] = scan_row(step, xi00_floor, i10, hist_prec_rho);
    return reduce_rows(row_best, step, xi00_floor);
}

OptimalDesign optimal_design_serial(double rho, double step, double xi00_floor) {
    check_grid_args(rho, step);
    const la::SymMatrix hist_prec_rho = la::invert(historical_sigma_balanced(1.0) * rho);
    const int rows = max_row_index(step, xi00_floor);
    if (rows < 1) throw DomainError("EmptyGrid", "no feasible design on the grid");
    std::vector<GridPoint> row_best(rows);
    for (int i10 = 1; i10 <= rows; ++i10)
        row_best[i10 - 1] = scan_row(step, xi00_floor, i10, hist_prec_rho);
    return reduce_rows(row_best, step, xi00_floor);
}

std::vector<Table1Row> emit_table1(const std::vector<std::int64_t>& m_list,
                                   const std::vector<std::int64_t>& n_list, double sigma2) {
    std::vector<Table1Row> rows;
    rows.reserve(m_list.size() * n_list.size());
    for (std::int64_t n : n_list)
        for (std::int64_t m : m_list) {
            if (n < 1 || m < 1) throw DomainError("InvalidSizes", "table sizes must be positive");
            const double rho = static_cast<double>(n) / static_cast<double>(m);
            rows.push_back(
                {n, m, var_theta_A(rho, sigma2), var_theta_B(DesignXi::balanced(), rho, sigma2)});
        }
    return rows;
}

std::vector<Table2Row> emit_table2(const std::vector<double>& rhos, double step,
                                   double xi00_floor, int threads) {
    std::vector<Table2Row> rows;
    rows.reserve(rhos.size());
    for (double rho : rhos) rows.push_back({rho, optimal_design(rho, step, xi00_floor, threads)});
    return rows;
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
    std::ostringstream out;
    out << "n,m,A_thetatheta,B_thetatheta\n";
    for (const Table1Row& r : rows)
        out << r.n << ',' << r.m << ',' << format_double(r.a_tt) << ',' << format_double(r.b_tt)
            << '\n';
    return out.str();
}

std::string table2_csv(const std::vector<Table2Row>& rows) {
    std::ostringstream out;
    out << "rho,B_min,xi00,xi10,xi01,xi11\n";
    for (const Table2Row& r : rows)
        out << format_double(r.rho) << ',' << format_double(r.design.value) << ','
            << format_double(r.design.xi.xi00) << ',' << format_double(r.design.xi.xi10) << ','
            << format_double(r.design.xi.xi01) << ',' << format_double(r.design.xi.xi11) << '\n';
    return out.str();
}

}  // namespace histfuse::anova
