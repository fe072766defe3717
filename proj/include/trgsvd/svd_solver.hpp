#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trgsvd/dense.hpp"
#include "trgsvd/dense_kernels.hpp"
#include "trgsvd/orthogonalization.hpp"
#include "trgsvd/sparse.hpp"
#include "trgsvd/which.hpp"

namespace trgsvd {

struct SvdTriple {
    double sigma = 0.0;
    Vector u;  // empty when unavailable (numerically zero sigma in cross/cyclic)
    Vector v;
    double residual_estimate = 0.0;
    double residual = 0.0;  // ||[A v - sigma u; A^T u - sigma v]||, evaluated directly
    bool converged = false;
};

struct SvdOptions {
    std::size_t nsv = 1;
    std::size_t ncv = 0;  // 0 means max(2 nsv, 10)
    Which which = Which::largest;
    double tol = 1e-8;
    std::size_t max_restarts = 1000;
    double keep = 0.5;
    std::uint64_t seed = 1;
};

struct SvdSolveResult {
    std::vector<SvdTriple> triples;
    std::size_t restarts = 0;
    std::size_t nconv = 0;
    OrthoCounter ortho;
};

/// Golub-Kahan bidiagonalization A Q_k = P_k B_k, A^T P_k = Q_k B_k^T + beta_k q_{k+1} e_k^T
/// with full reorthogonalization of both bases. After truncate() the leading
/// block of B is diagonal and the next column carries the restart spike.
class LanczosBidiagonalization {
public:
    LanczosBidiagonalization(const SparseMatrix& a, std::span<const double> q1, std::size_t max_order,
                             std::uint64_t seed = 1);

    /// Runs steps order()..to-1.
    void extend(std::size_t to);
    /// Keeps the leading r columns of x, y (k x k, singular vectors of the
    /// projected matrix, already sorted); q_{k+1} becomes q_{r+1}.
    void truncate(const DenseMatrix& x, const DenseMatrix& y, std::span<const double> sigma, std::size_t r);

    std::size_t order() const { return k_; }
    std::size_t max_order() const { return max_order_; }
    /// Leading k x k block of the projected upper triangular matrix.
    DenseMatrix projected() const { return b_.block(0, 0, k_, k_); }
    const DenseMatrix& p() const { return p_; }  // m x max_order
    const DenseMatrix& q() const { return q_; }  // n x (max_order + 1)
    double beta_last() const { return beta_last_; }
    /// rho_i = beta_k x_{k,i} from the most recent truncation.
    const Vector& spikes() const { return spikes_; }
    const OrthoCounter& ortho() const { return ortho_; }
    std::size_t breakdowns() const { return breakdowns_; }
    /// True when a step found no vector orthogonal to the current basis.
    bool exhausted() const { return exhausted_; }

private:
    void step(std::size_t j);

    const SparseMatrix& a_;
    std::size_t max_order_;
    std::size_t k_ = 0;
    DenseMatrix p_;
    DenseMatrix q_;
    DenseMatrix b_;
    double beta_last_ = 0.0;
    Vector spikes_;
    double breakdown_tol_;
    SplitMix64 rng_;
    OrthoCounter ortho_;
    std::size_t breakdowns_ = 0;
    bool exhausted_ = false;
};

SvdSolveResult svd_solve(const SparseMatrix& a, const SvdOptions& opts);

/// Dense references through the eigenproblems of A^T A (or A A^T) and [0 A; A^T 0].
std::vector<SvdTriple> svd_cross(const SparseMatrix& a, std::size_t nsv, Which which);
std::vector<SvdTriple> svd_cyclic(const SparseMatrix& a, std::size_t nsv, Which which);

}  // namespace trgsvd
