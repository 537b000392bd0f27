#ifndef HISTFUSE_MATRIX_HPP
#define HISTFUSE_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "histfuse/errors.hpp"

// Dense matrix kernel for the small (dim <= ~10) symmetric problems handled
// by this library. Row-major storage, value semantics, no sparsity.

namespace histfuse::la {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix row_vector(const std::vector<double>& v);
    static Matrix col_vector(const std::vector<double>& v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix operator*(const Matrix& other) const;
    Matrix operator*(double s) const;
    std::vector<double> operator*(const std::vector<double>& v) const;

    // largest absolute entry; 0 for an empty matrix
    double max_abs() const;
    bool all_zero() const;

    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(double s, const Matrix& m);

// Symmetric matrix. Construction symmetrizes (M + M^T)/2 when the asymmetry
// is at most 1e-10 * max_abs(M) and rejects otherwise, so downstream products
// of symmetric factors may drift slightly without tripping validation.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim) : mat_(dim, dim) {}
    SymMatrix(std::size_t dim, std::initializer_list<double> entries);
    static SymMatrix from_matrix(const Matrix& m, double asym_tol = 1e-10);
    static SymMatrix identity(std::size_t n);
    static SymMatrix diagonal(const std::vector<double>& d);

    std::size_t dim() const noexcept { return mat_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }
    void set(std::size_t i, std::size_t j, double v) {
        mat_(i, j) = v;
        mat_(j, i) = v;
    }

    const Matrix& mat() const noexcept { return mat_; }
    double max_abs() const { return mat_.max_abs(); }
    double max_diag() const;
    bool all_zero() const { return mat_.all_zero(); }

    SymMatrix operator+(const SymMatrix& other) const;
    SymMatrix operator-(const SymMatrix& other) const;
    SymMatrix operator*(double s) const;
    std::vector<double> operator*(const std::vector<double>& v) const { return mat_ * v; }

private:
    Matrix mat_;
};

SymMatrix operator*(double s, const SymMatrix& m);

// Lower-triangular L with L L^T = m. Pivots below tol (default
// 1e-10 * max diagonal) raise NotPD.
Matrix cholesky(const SymMatrix& m, double tol = -1.0);
bool is_positive_definite(const SymMatrix& m, double tol = -1.0);

// Solve m x = b for symmetric positive definite m via Cholesky.
std::vector<double> solve_spd(const SymMatrix& m, const std::vector<double>& b, double tol = -1.0);
Matrix solve_spd(const SymMatrix& m, const Matrix& b, double tol = -1.0);

// Inverse of a symmetric positive definite matrix. Raises IllConditioned when
// the eigenvalue-ratio condition estimate exceeds 1e12.
SymMatrix invert(const SymMatrix& m, double tol = -1.0);

// All eigenvalues (ascending) by cyclic Jacobi rotations.
std::vector<double> eigenvalues(const SymMatrix& m);
double min_eigenvalue(const SymMatrix& m);

// Loewner partial order: v1 <= v2 iff min_eig(v2 - v1) >= -tol * max_abs(v2).
bool loewner_leq(const SymMatrix& v1, const SymMatrix& v2, double tol = 1e-9);

// General square solve with partially pivoted LU (for non-symmetric
// sensitivity matrices). Raises SingularMatrix on pivot breakdown.
Matrix lu_solve(const Matrix& a, const Matrix& b);
std::vector<double> lu_solve(const Matrix& a, const std::vector<double>& b);
// max/min pivot magnitude ratio of the LU factorization; +inf when singular
double lu_condition_estimate(const Matrix& a);

// 2x2 block grid with conformable dimensions (p, q).
struct BlockMatrix {
    Matrix b00, b01, b10, b11;

    BlockMatrix(Matrix m00, Matrix m01, Matrix m10, Matrix m11);
    std::size_t p() const noexcept { return b00.rows(); }
    std::size_t q() const noexcept { return b11.rows(); }
    Matrix assemble() const;
    bool symmetric(double tol = 1e-10) const;
};

// Assemble [[tt, te], [te^T, ee]] into one symmetric (p+q) matrix.
SymMatrix assemble_symmetric(const SymMatrix& tt, const Matrix& te, const SymMatrix& ee);

}  // namespace histfuse::la

#endif
