#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trgsvd {

using Vector = std::vector<double>;

// Sequential left-to-right reductions; results are bitwise reproducible.
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);  // y += a x
void scale(double a, std::span<double> x);

/// Column-major dense matrix. Used for Krylov bases and projected problems.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    /// Resize keeping the leading columns; rows must not change unless empty.
    void resize_cols(std::size_t cols);

    DenseMatrix transpose() const;
    /// Leading block rows [0, r) x cols [0, c).
    DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a^T b without forming the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
Vector matvec(const DenseMatrix& a, std::span<const double> x);
Vector matvec_t(const DenseMatrix& a, std::span<const double> y);

/// y = a(:, 0:ncols) * x
Vector combine_columns(const DenseMatrix& a, std::size_t ncols, std::span<const double> x);

double max_abs(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
/// max |a^T a - I| over the leading ncols columns.
double orthogonality_error(const DenseMatrix& a, std::size_t ncols);
double orthogonality_error(const DenseMatrix& a);

}  // namespace trgsvd
