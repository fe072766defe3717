#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "trgsvd/dense.hpp"
#include "trgsvd/stacked.hpp"

namespace trgsvd {

enum class LsMethod { lsqr, dense_qr };

struct LsConfig {
    LsMethod method = LsMethod::lsqr;
    double lsqr_tol = 1e-10;
    std::size_t lsqr_maxit = 0;  // 0 means 10 (m+p)
    std::size_t dense_limit = 5000;

    void validate() const;
};

struct LsResult {
    Vector x;
    std::size_t iterations = 0;
    double residual_norm = 0.0;  // ||Z x - b||
    double normal_residual = 0.0;  // ||Z^T (Z x - b)||
};

/// Householder QR of a dense tall matrix, kept in compact LAPACK form.
class HouseholderQR {
public:
    explicit HouseholderQR(DenseMatrix a);

    std::size_t rows() const { return qr_.rows(); }
    std::size_t cols() const { return qr_.cols(); }
    double r_diag(std::size_t i) const { return qr_(i, i); }

    /// Overwrites b with Q^T b.
    void apply_qt(std::span<double> b) const;
    /// argmin ||A x - b||; throws NotRegularError if some |R_ii| < rank_tol.
    Vector solve(std::span<const double> b, double rank_tol) const;

private:
    DenseMatrix qr_;
    Vector tau_;
};

/// Least-squares solver bound to one stacked operator. The dense QR
/// factorization, when selected, is computed once and reused.
class LeastSquaresSolver {
public:
    LeastSquaresSolver(const StackedOperator& z, LsConfig cfg = {});

    const LsConfig& config() const { return cfg_; }
    const StackedOperator& op() const { return z_; }

    LsResult solve(std::span<const double> b) const;
    /// Z x with x = argmin ||Z x - [u; 0]||. Adds the iteration count to *iterations.
    Vector expand(std::span<const double> u, std::size_t* iterations = nullptr) const;
    /// Z x with x = argmin ||Z x - b||: the orthogonal projection of b onto range(Z).
    Vector project(std::span<const double> b, std::size_t* iterations = nullptr) const;

    /// Minimizes ||Z x - b|| with LSQR regardless of the configured method.
    LsResult lsqr(std::span<const double> b) const;

private:
    const StackedOperator& z_;
    LsConfig cfg_;
    std::unique_ptr<HouseholderQR> qr_;
    double rank_tol_ = 0.0;
};

LsResult solve_ls(const StackedOperator& z, std::span<const double> b, const LsConfig& cfg = {});
Vector expand(const StackedOperator& z, std::span<const double> u, const LsConfig& cfg = {});

}  // namespace trgsvd
