#include "trgsvd/stacked.hpp"

#include <algorithm>
#include <cmath>

#include "trgsvd/error.hpp"

namespace trgsvd {

StackedOperator::StackedOperator(SparseMatrix a, SparseMatrix b, double gamma)
    : a_(std::move(a)), b_(std::move(b)), gamma_(gamma) {
    if (a_.ncols() != b_.ncols()) throw DimensionError("A and B must have the same number of columns");
    if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) throw InvalidArgument("scale factor gamma must be positive");
    norm_inf_ = std::max(inf_norm(a_), gamma_ * inf_norm(b_));
    norm_bound_ = std::sqrt(static_cast<double>(rows())) * norm_inf_;
}

Vector StackedOperator::apply(std::span<const double> x) const {
    if (x.size() != n()) throw DimensionError("stacked_apply: dimension mismatch");
    Vector y(rows());
    const Vector top = spmv(a_, x);
    const Vector bottom = spmv(b_, x);
    std::copy(top.begin(), top.end(), y.begin());
    for (std::size_t i = 0; i < bottom.size(); ++i) y[m() + i] = gamma_ * bottom[i];
    return y;
}

Vector StackedOperator::adjoint(std::span<const double> y) const {
    if (y.size() != rows()) throw DimensionError("stacked_adjoint: dimension mismatch");
    Vector x = spmv_transpose(a_, y.first(m()));
    const Vector xb = spmv_transpose(b_, y.subspan(m()));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += gamma_ * xb[i];
    return x;
}

DenseMatrix StackedOperator::to_dense() const {
    DenseMatrix z(rows(), n());
    const DenseMatrix ad = a_.to_dense();
    const DenseMatrix bd = b_.to_dense();
    for (std::size_t j = 0; j < n(); ++j) {
        for (std::size_t i = 0; i < m(); ++i) z(i, j) = ad(i, j);
        for (std::size_t i = 0; i < p(); ++i) z(m() + i, j) = gamma_ * bd(i, j);
    }
    return z;
}

}  // namespace trgsvd
