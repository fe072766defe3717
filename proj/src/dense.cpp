#include "trgsvd/dense.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "trgsvd/error.hpp"

namespace trgsvd {

double dot(std::span<const double> x, std::span<const double> y) {
    assert(x.size() == y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) {
    double scale_ = 0.0;
    for (double v : x) scale_ = std::max(scale_, std::abs(v));
    if (scale_ == 0.0) return 0.0;
    if (scale_ > 1e150 || scale_ < 1e-150) {
        double s = 0.0;
        for (double v : x) {
            const double t = v / scale_;
            s += t * t;
        }
        return scale_ * std::sqrt(s);
    }
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
    for (double& v : x) v *= a;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

void DenseMatrix::resize_cols(std::size_t cols) {
    data_.resize(rows_ * cols, 0.0);
    cols_ = cols;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const {
    if (r0 + r > rows_ || c0 + c > cols_) throw DimensionError("DenseMatrix::block out of range");
    DenseMatrix b(r, c);
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t i = 0; i < r; ++i) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto cj = c.col(j);
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double blj = b(l, j);
            if (blj != 0.0) axpy(blj, a.col(l), cj);
        }
    }
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("matmul_tn: row dimensions differ");
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
    return c;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw DimensionError("matvec: dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (x[j] != 0.0) axpy(x[j], a.col(j), y);
    return y;
}

Vector matvec_t(const DenseMatrix& a, std::span<const double> y) {
    if (y.size() != a.rows()) throw DimensionError("matvec_t: dimension mismatch");
    Vector x(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) x[j] = dot(a.col(j), y);
    return x;
}

Vector combine_columns(const DenseMatrix& a, std::size_t ncols, std::span<const double> x) {
    assert(ncols <= a.cols() && x.size() >= ncols);
    Vector y(a.rows(), 0.0);
    for (std::size_t j = 0; j < ncols; ++j)
        if (x[j] != 0.0) axpy(x[j], a.col(j), y);
    return y;
}

double max_abs(const DenseMatrix& a) { return norm_inf(a.values()); }

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

double orthogonality_error(const DenseMatrix& a, std::size_t ncols) {
    double m = 0.0;
    for (std::size_t j = 0; j < ncols; ++j)
        for (std::size_t i = 0; i <= j; ++i) {
            const double g = dot(a.col(i), a.col(j)) - (i == j ? 1.0 : 0.0);
            m = std::max(m, std::abs(g));
        }
    return m;
}

double orthogonality_error(const DenseMatrix& a) { return orthogonality_error(a, a.cols()); }

}  // namespace trgsvd
