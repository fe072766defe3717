#pragma once

#include <span>

#include "trgsvd/sparse.hpp"

namespace trgsvd {

/// The operator Z = [A; gamma B], never formed explicitly.
class StackedOperator {
public:
    StackedOperator(SparseMatrix a, SparseMatrix b, double gamma = 1.0);

    const SparseMatrix& a() const { return a_; }
    const SparseMatrix& b() const { return b_; }
    double gamma() const { return gamma_; }

    std::size_t m() const { return a_.nrows(); }
    std::size_t p() const { return b_.nrows(); }
    std::size_t n() const { return a_.ncols(); }
    std::size_t rows() const { return m() + p(); }

    /// sqrt(m+p) * max(||A||_inf, gamma ||B||_inf), an upper bound on ||Z||_2.
    double norm_bound() const { return norm_bound_; }
    /// ||Z||_inf = max(||A||_inf, gamma ||B||_inf).
    double norm_inf() const { return norm_inf_; }

    /// [A x; gamma B x]
    Vector apply(std::span<const double> x) const;
    /// A^T y_top + gamma B^T y_bottom
    Vector adjoint(std::span<const double> y) const;

    /// Explicit (m+p) x n dense stacking, for factorizations and oracles.
    DenseMatrix to_dense() const;

private:
    SparseMatrix a_;
    SparseMatrix b_;
    double gamma_;
    double norm_inf_;
    double norm_bound_;
};

inline Vector stacked_apply(const StackedOperator& z, std::span<const double> x) { return z.apply(x); }
inline Vector stacked_adjoint(const StackedOperator& z, std::span<const double> y) { return z.adjoint(y); }

}  // namespace trgsvd
