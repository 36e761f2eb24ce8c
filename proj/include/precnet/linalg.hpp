#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace precnet {

using Vector = std::vector<double>;

// Dense row-major matrix. General-purpose container for data, factors and
// scratch work; no structural invariants.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// Symmetric p x p matrix in packed lower-triangular storage: (i,j) and (j,i)
// address the same cell, so symmetry cannot be broken by mutation.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim, double fill = 0.0);

    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(std::span<const double> diag);
    // Averages (i,j) and (j,i); throws DimensionMismatch for non-square input.
    static SymMatrix from_dense(const Matrix& m);

    std::size_t dim() const noexcept { return dim_; }

    double operator()(std::size_t i, std::size_t j) const { return cells_[index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) { return cells_[index(i, j)]; }

    Matrix to_dense() const;
    std::span<const double> packed() const noexcept { return cells_; }

    double max_abs() const;
    bool all_finite() const;

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    static std::size_t index(std::size_t i, std::size_t j) noexcept {
        return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
    }

    std::size_t dim_ = 0;
    std::vector<double> cells_;
};

// Lower-triangular L with m = L L^T. Throws NotPositiveDefinite when a pivot
// does not exceed 1e-12 * max diagonal, InvalidParameter on non-finite input.
Matrix cholesky(const SymMatrix& m);

// A symmetric matrix carrying a successful Cholesky factorization.
class SpdMatrix {
public:
    SpdMatrix() = default;
    explicit SpdMatrix(SymMatrix m);

    std::size_t dim() const noexcept { return sym_.dim(); }
    double operator()(std::size_t i, std::size_t j) const { return sym_(i, j); }
    const SymMatrix& sym() const noexcept { return sym_; }
    const Matrix& factor() const noexcept { return factor_; }

private:
    SymMatrix sym_;
    Matrix factor_;
};

double log_det_spd(const SpdMatrix& m);
SpdMatrix spd_inverse(const SpdMatrix& m);
// Solves m x = b using the stored factor.
Vector spd_solve(const SpdMatrix& m, std::span<const double> b);

// sum_ij a_ij b_ij == tr(a b) for symmetric arguments.
double trace_product(const SymMatrix& a, const SymMatrix& b);
double quadratic_form(const SymMatrix& m, std::span<const double> x);
Vector mat_vec(const SymMatrix& m, std::span<const double> x);
double max_abs_diff(const SymMatrix& a, const SymMatrix& b);

// n observations (rows) of p variables.
class DataMatrix {
public:
    DataMatrix() = default;
    // Throws InvalidParameter on an empty or non-finite matrix.
    explicit DataMatrix(Matrix values);

    std::size_t n() const noexcept { return values_.rows(); }
    std::size_t p() const noexcept { return values_.cols(); }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
    std::span<const double> row(std::size_t i) const { return values_.row(i); }
    const Matrix& values() const noexcept { return values_; }

    DataMatrix select_rows(std::span<const std::size_t> rows) const;
    DataMatrix select_cols(std::span<const std::size_t> cols) const;

private:
    Matrix values_;
};

Vector column_means(const DataMatrix& x);
// Divides by n, not n - 1.
SymMatrix sample_covariance(const DataMatrix& x);

}  // namespace precnet
