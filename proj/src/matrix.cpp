#include "histfuse/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace histfuse::la {

namespace {

void require(bool ok, const char* code, const std::string& msg) {
    if (!ok) throw DomainError(code, msg);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries)
    : rows_(rows), cols_(cols), data_(entries) {
    require(data_.size() == rows * cols, "DimMismatch",
            "initializer has " + std::to_string(data_.size()) + " entries, expected " +
                std::to_string(rows * cols));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::row_vector(const std::vector<double>& v) {
    Matrix m(1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
    return m;
}

Matrix Matrix::col_vector(const std::vector<double>& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator+(const Matrix& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_, "DimMismatch", "matrix sum shape mismatch");
    Matrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + other.data_[k];
    return r;
}

Matrix Matrix::operator-(const Matrix& other) const {
    require(rows_ == other.rows_ && cols_ == other.cols_, "DimMismatch", "matrix difference shape mismatch");
    Matrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - other.data_[k];
    return r;
}

Matrix Matrix::operator*(const Matrix& other) const {
    require(cols_ == other.rows_, "DimMismatch", "matrix product shape mismatch");
    Matrix r(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
        }
    return r;
}

Matrix Matrix::operator*(double s) const {
    Matrix r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * s;
    return r;
}

std::vector<double> Matrix::operator*(const std::vector<double>& v) const {
    require(cols_ == v.size(), "DimMismatch", "matrix-vector shape mismatch");
    std::vector<double> r(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::fabs(x));
    return m;
}

bool Matrix::all_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return x == 0.0; });
}

Matrix operator*(double s, const Matrix& m) { return m * s; }

SymMatrix::SymMatrix(std::size_t dim, std::initializer_list<double> entries) {
    *this = from_matrix(Matrix(dim, dim, entries));
}

SymMatrix SymMatrix::from_matrix(const Matrix& m, double asym_tol) {
    require(m.rows() == m.cols(), "DimMismatch", "symmetric matrix must be square");
    require(m.rows() >= 1, "DimMismatch", "symmetric matrix must have dim >= 1");
    double asym = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            asym = std::max(asym, std::fabs(m(i, j) - m(j, i)));
    if (asym > asym_tol * std::max(m.max_abs(), 1e-300))
        throw DomainError("AsymmetricInput", "matrix asymmetry exceeds tolerance")
            .with("asymmetry", std::to_string(asym));
    SymMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s.mat_(i, i) = m(i, i);
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            s.mat_(i, j) = v;
            s.mat_(j, i) = v;
        }
    }
    return s;
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

double SymMatrix::max_diag() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dim(); ++i) m = std::max(m, mat_(i, i));
    return m;
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
    SymMatrix r;
    r.mat_ = mat_ + other.mat_;
    return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const {
    SymMatrix r;
    r.mat_ = mat_ - other.mat_;
    return r;
}

SymMatrix SymMatrix::operator*(double s) const {
    SymMatrix r;
    r.mat_ = mat_ * s;
    return r;
}

SymMatrix operator*(double s, const SymMatrix& m) { return m * s; }

namespace {

double effective_pd_tol(const SymMatrix& m, double tol) {
    if (tol >= 0.0) return tol;
    return 1e-10 * std::max(m.max_diag(), 0.0);
}

// lower Cholesky; returns false on a pivot below tol
bool cholesky_impl(const SymMatrix& m, double tol, Matrix& l) {
    const std::size_t n = m.dim();
    l = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d < tol || d <= 0.0) return false;
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

std::vector<double> chol_solve(const Matrix& l, const std::vector<double>& b) {
    const std::size_t n = l.rows();
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

}  // namespace

Matrix cholesky(const SymMatrix& m, double tol) {
    Matrix l;
    if (!cholesky_impl(m, effective_pd_tol(m, tol), l))
        throw DomainError("NotPD", "matrix is not positive definite at tolerance")
            .with("dim", std::to_string(m.dim()));
    return l;
}

bool is_positive_definite(const SymMatrix& m, double tol) {
    Matrix l;
    return cholesky_impl(m, effective_pd_tol(m, tol), l);
}

std::vector<double> solve_spd(const SymMatrix& m, const std::vector<double>& b, double tol) {
    if (b.size() != m.dim()) throw DomainError("DimMismatch", "solve rhs length mismatch");
    return chol_solve(cholesky(m, tol), b);
}

Matrix solve_spd(const SymMatrix& m, const Matrix& b, double tol) {
    if (b.rows() != m.dim()) throw DomainError("DimMismatch", "solve rhs row mismatch");
    const Matrix l = cholesky(m, tol);
    Matrix x(b.rows(), b.cols());
    std::vector<double> col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        const std::vector<double> sol = chol_solve(l, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

SymMatrix invert(const SymMatrix& m, double tol) {
    const std::vector<double> eig = eigenvalues(m);
    const double lo = std::fabs(eig.front());
    const double hi = std::fabs(eig.back());
    if (lo > 0.0 && hi / lo > 1e12)
        throw DomainError("IllConditioned", "condition number estimate exceeds 1e12")
            .with("cond", std::to_string(hi / lo));
    const Matrix inv = solve_spd(m, Matrix::identity(m.dim()), tol);
    return SymMatrix::from_matrix(inv, 1e-6);
}

std::vector<double> eigenvalues(const SymMatrix& m) {
    const std::size_t n = m.dim();
    Matrix a = m.mat();
    // cyclic Jacobi sweeps; plenty accurate at dim <= ~10
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::fabs(a(p, q)));
        if (off <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-18 * scale) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double min_eigenvalue(const SymMatrix& m) { return eigenvalues(m).front(); }

bool loewner_leq(const SymMatrix& v1, const SymMatrix& v2, double tol) {
    if (v1.dim() != v2.dim())
        throw DomainError("DimMismatch", "Loewner comparison requires equal dims");
    return min_eigenvalue(v2 - v1) >= -tol * std::max(v2.max_abs(), 1e-300);
}

namespace {

struct Lu {
    Matrix lu;
    std::vector<std::size_t> perm;
    double min_pivot = 0.0;
    double max_pivot = 0.0;
    bool singular = false;
};

Lu lu_factor(const Matrix& a) {
    if (a.rows() != a.cols()) throw DomainError("DimMismatch", "LU requires a square matrix");
    const std::size_t n = a.rows();
    Lu f{a, std::vector<std::size_t>(n), 0.0, 0.0, false};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    f.min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(f.lu(i, k)) > std::fabs(f.lu(piv, k))) piv = i;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        const double p = std::fabs(f.lu(k, k));
        f.min_pivot = std::min(f.min_pivot, p);
        f.max_pivot = std::max(f.max_pivot, p);
        if (p == 0.0) {
            f.singular = true;
            return f;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

}  // namespace

Matrix lu_solve(const Matrix& a, const Matrix& b) {
    const Lu f = lu_factor(a);
    if (f.singular || f.min_pivot < 1e-14 * std::max(f.max_pivot, 1e-300))
        throw DomainError("SingularMatrix", "LU pivot breakdown");
    const std::size_t n = a.rows();
    if (b.rows() != n) throw DomainError("DimMismatch", "LU rhs row mismatch");
    Matrix x(n, b.cols());
    std::vector<double> y(n);
    for (std::size_t col = 0; col < b.cols(); ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = b(f.perm[i], col);
            for (std::size_t k = 0; k < i; ++k) s -= f.lu(i, k) * y[k];
            y[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= f.lu(ii, k) * x(k, col);
            x(ii, col) = s / f.lu(ii, ii);
        }
    }
    return x;
}

std::vector<double> lu_solve(const Matrix& a, const std::vector<double>& b) {
    const Matrix x = lu_solve(a, Matrix::col_vector(b));
    std::vector<double> r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = x(i, 0);
    return r;
}

double lu_condition_estimate(const Matrix& a) {
    const Lu f = lu_factor(a);
    if (f.singular || f.min_pivot == 0.0) return std::numeric_limits<double>::infinity();
    return f.max_pivot / f.min_pivot;
}

BlockMatrix::BlockMatrix(Matrix m00, Matrix m01, Matrix m10, Matrix m11)
    : b00(std::move(m00)), b01(std::move(m01)), b10(std::move(m10)), b11(std::move(m11)) {
    const bool ok = b00.rows() == b01.rows() && b10.rows() == b11.rows() &&
                    b00.cols() == b10.cols() && b01.cols() == b11.cols() &&
                    b00.rows() == b00.cols() && b11.rows() == b11.cols();
    if (!ok) throw DomainError("DimMismatch", "block grid is not conformable");
}

Matrix BlockMatrix::assemble() const {
    const std::size_t pp = p();
    const std::size_t qq = q();
    Matrix m(pp + qq, pp + qq);
    for (std::size_t i = 0; i < pp; ++i) {
        for (std::size_t j = 0; j < pp; ++j) m(i, j) = b00(i, j);
        for (std::size_t j = 0; j < qq; ++j) m(i, pp + j) = b01(i, j);
    }
    for (std::size_t i = 0; i < qq; ++i) {
        for (std::size_t j = 0; j < pp; ++j) m(pp + i, j) = b10(i, j);
        for (std::size_t j = 0; j < qq; ++j) m(pp + i, pp + j) = b11(i, j);
    }
    return m;
}

bool BlockMatrix::symmetric(double tol) const {
    const Matrix m = assemble();
    const double scale = std::max(m.max_abs(), 1e-300);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (std::fabs(m(i, j) - m(j, i)) > tol * scale) return false;
    return true;
}

SymMatrix assemble_symmetric(const SymMatrix& tt, const Matrix& te, const SymMatrix& ee) {
    if (te.rows() != tt.dim() || te.cols() != ee.dim())
        throw DomainError("DimMismatch", "off-diagonal block shape mismatch");
    const BlockMatrix blocks(tt.mat(), te, te.transpose(), ee.mat());
    return SymMatrix::from_matrix(blocks.assemble());
}

}  // namespace histfuse::la
