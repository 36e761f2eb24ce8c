#include "precnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "precnet/error.hpp"

namespace precnet {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("multiply: inner dimensions " + std::to_string(a.cols()) +
                                " and " + std::to_string(b.rows()));
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

SymMatrix::SymMatrix(std::size_t dim, double fill) : dim_(dim), cells_(dim * (dim + 1) / 2, fill) {
    if (dim == 0) throw InvalidParameter("SymMatrix: dimension must be at least 1");
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
    SymMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

SymMatrix SymMatrix::from_dense(const Matrix& m) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("SymMatrix::from_dense: matrix is " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()));
    SymMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return s;
}

Matrix SymMatrix::to_dense() const {
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = (*this)(i, j);
    return m;
}

double SymMatrix::max_abs() const {
    double r = 0.0;
    for (double v : cells_) r = std::max(r, std::abs(v));
    return r;
}

bool SymMatrix::all_finite() const {
    return std::all_of(cells_.begin(), cells_.end(), [](double v) { return std::isfinite(v); });
}

Matrix cholesky(const SymMatrix& m) {
    if (!m.all_finite()) throw InvalidParameter("cholesky: matrix has non-finite entries");
    const std::size_t p = m.dim();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, m(i, i));
    const double pivot_floor = 1e-12 * max_diag;

    Matrix l(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > pivot_floor) || d <= 0.0)
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) + " is " +
                                      std::to_string(d));
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < p; ++i) {
            double v = m(i, j);
            const auto li = l.row(i);
            const auto lj = l.row(j);
            for (std::size_t k = 0; k < j; ++k) v -= li[k] * lj[k];
            l(i, j) = v / ljj;
        }
    }
    return l;
}

SpdMatrix::SpdMatrix(SymMatrix m) : sym_(std::move(m)), factor_(cholesky(sym_)) {}

double log_det_spd(const SpdMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) r += std::log(m.factor()(i, i));
    return 2.0 * r;
}

SpdMatrix spd_inverse(const SpdMatrix& m) {
    const std::size_t p = m.dim();
    const Matrix& l = m.factor();
    // Invert L by forward substitution, then m^-1 = L^-T L^-1.
    Matrix linv(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        linv(j, j) = 1.0 / l(j, j);
        for (std::size_t i = j + 1; i < p; ++i) {
            double v = 0.0;
            for (std::size_t k = j; k < i; ++k) v -= l(i, k) * linv(k, j);
            linv(i, j) = v / l(i, i);
        }
    }
    SymMatrix inv(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double v = 0.0;
            for (std::size_t k = i; k < p; ++k) v += linv(k, i) * linv(k, j);
            inv(i, j) = v;
        }
    return SpdMatrix(std::move(inv));
}

Vector spd_solve(const SpdMatrix& m, std::span<const double> b) {
    const std::size_t p = m.dim();
    if (b.size() != p) throw DimensionMismatch("spd_solve: right-hand side has wrong length");
    const Matrix& l = m.factor();
    Vector y(b.begin(), b.end());
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
        y[i] /= l(i, i);
    }
    for (std::size_t i = p; i-- > 0;) {
        for (std::size_t k = i + 1; k < p; ++k) y[i] -= l(k, i) * y[k];
        y[i] /= l(i, i);
    }
    return y;
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("trace_product: dimensions differ");
    double r = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        r += a(i, i) * b(i, i);
        for (std::size_t j = 0; j < i; ++j) r += 2.0 * a(i, j) * b(i, j);
    }
    return r;
}

Vector mat_vec(const SymMatrix& m, std::span<const double> x) {
    if (x.size() != m.dim()) throw DimensionMismatch("mat_vec: vector has wrong length");
    Vector y(m.dim(), 0.0);
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) y[i] += m(i, j) * x[j];
    return y;
}

double quadratic_form(const SymMatrix& m, std::span<const double> x) {
    const Vector y = mat_vec(m, x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r += x[i] * y[i];
    return r;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("max_abs_diff: dimensions differ");
    double r = 0.0;
    const auto pa = a.packed();
    const auto pb = b.packed();
    for (std::size_t k = 0; k < pa.size(); ++k) r = std::max(r, std::abs(pa[k] - pb[k]));
    return r;
}

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() == 0 || values_.cols() == 0)
        throw InvalidParameter("DataMatrix: needs at least one row and one column");
    for (double v : values_.values())
        if (!std::isfinite(v)) throw InvalidParameter("DataMatrix: non-finite entry");
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix m(rows.size(), p());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto src = row(rows[r]);
        std::copy(src.begin(), src.end(), m.row(r).begin());
    }
    return DataMatrix(std::move(m));
}

DataMatrix DataMatrix::select_cols(std::span<const std::size_t> cols) const {
    Matrix m(n(), cols.size());
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t c = 0; c < cols.size(); ++c) m(i, c) = values_(i, cols[c]);
    return DataMatrix(std::move(m));
}

Vector column_means(const DataMatrix& x) {
    Vector mean(x.p(), 0.0);
    for (std::size_t i = 0; i < x.n(); ++i)
        for (std::size_t j = 0; j < x.p(); ++j) mean[j] += x(i, j);
    for (double& v : mean) v /= static_cast<double>(x.n());
    return mean;
}

SymMatrix sample_covariance(const DataMatrix& x) {
    const std::size_t n = x.n();
    const std::size_t p = x.p();
    const Vector mean = column_means(x);
    Matrix centered(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) centered(i, j) = x(i, j) - mean[j];
    SymMatrix s(p);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = centered.row(i);
        for (std::size_t j = 0; j < p; ++j) {
            if (r[j] == 0.0) continue;
            for (std::size_t k = 0; k <= j; ++k) s(j, k) += r[j] * r[k];
        }
    }
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k <= j; ++k) s(j, k) /= static_cast<double>(n);
    return s;
}

}  // namespace precnet
