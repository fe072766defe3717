#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "trgsvd/dense.hpp"
#include "trgsvd/dense_kernels.hpp"
#include "trgsvd/least_squares.hpp"
#include "trgsvd/orthogonalization.hpp"
#include "trgsvd/sparse.hpp"
#include "trgsvd/stacked.hpp"
#include "trgsvd/which.hpp"

namespace trgsvd {

/// s below this makes a generalized singular value infinite.
inline constexpr double kInfiniteTol = 1e-12;
/// Guard on the diagonal of the upper bidiagonal factor before dividing by it.
inline constexpr double kHatDivisionTol = 1e-13;

/// Compact view of the projected pair {J, Jc}. J is (k+1) x k lower
/// bidiagonal, Jc = Jh D is k x k with D = diag(1, -1, 1, ...) and Jh upper
/// bidiagonal. After a restart of size r the leading r columns are diagonal
/// (arrow_c, arrow_s) and column r carries the spikes.
struct BidiagonalPair {
    std::size_t k = 0;
    Vector alpha;       // J(j, j), j < k, followed by the spike alpha_{k+1}
    Vector beta;        // J(j+1, j)
    Vector alpha_hat;   // |Jc(j, j)|
    Vector beta_hat;    // |Jc(j, j+1)|, j + 1 < k
    double beta_check = 0.0;  // Jc(k-1, k), the spike of the lower relation
    std::size_t arrow_len = 0;
    Vector arrow_c;
    Vector arrow_spike;      // length arrow_len + 1
    Vector arrow_s;
    Vector arrow_spike_hat;  // length arrow_len

    /// Sign of column j of Jc relative to Jh.
    static double parity(std::size_t j) { return j % 2 == 0 ? 1.0 : -1.0; }
};

struct GsvdQuadruple {
    double sigma = 0.0;
    bool infinite = false;
    double c = 0.0;
    double s = 0.0;
    Vector u_a;
    Vector u_b;
    Vector g;
    double residual_estimate = 0.0;
    double residual = 0.0;           // ||s A^T u_a - c (gamma B)^T u_b|| on the pair that was iterated on
    double relative_residual = 0.0;  // ||s A^T u_a - c B^T u_b|| / ||[A; B]||_inf on the input pair
    bool converged = false;
};

struct GsvdOptions {
    std::size_t nsv = 1;
    std::size_t ncv = 0;  // 0 means max(2 nsv, 10)
    Which which = Which::largest;
    double tol = 1e-8;
    std::size_t max_restarts = 2000;
    double keep = 0.5;
    double gamma = 1.0;
    bool one_sided = false;
    bool locking = true;
    LsConfig ls;
    std::uint64_t seed = 1;

    void validate() const;
};

struct GsvdStats {
    std::size_t restarts = 0;
    std::size_t steps = 0;
    std::size_t nconv = 0;
    std::size_t ls_solves = 0;
    std::size_t ls_iterations = 0;
    std::size_t breakdowns = 0;
    OrthoCounter ortho;
    double wall_time_s = 0.0;
};

struct GsvdResult {
    std::vector<GsvdQuadruple> values;
    GsvdStats stats;
    bool all_converged() const;
};

/// Lower-upper joint Lanczos bidiagonalization of Z = [A; gamma B]:
///   [I 0] V = U J,   [0 I] V = Uh Jc,
///   P [U; 0] = V J^T + alpha_{k+1} v_{k+1} e_{k+1}^T,
///   P [0; Uh] = V Jc^T + beta_check v_{k+1} e_k^T,
/// with P the orthogonal projector onto range(Z).
class JointBidiagonalization {
public:
    JointBidiagonalization(const StackedOperator& z, const LeastSquaresSolver& ls, std::size_t max_order,
                           bool one_sided = false, std::uint64_t seed = 1);

    /// Starts from u1 (normalized here). Throws BreakdownError if u1 has no
    /// component in the top block of range(Z).
    void init(std::span<const double> u1);
    /// Runs steps until order() == to or the Krylov space is exhausted.
    void extend(std::size_t to);
    void step();

    /// Restart keeping the leading r columns of a sorted decomposition of
    /// the current pair. Spikes of the first `nlock` columns are dropped.
    void truncate(const CsDecomposition& cs, std::size_t r, std::size_t nlock = 0);

    std::size_t order() const { return k_; }
    std::size_t max_order() const { return max_order_; }
    bool exhausted() const { return exhausted_; }
    bool one_sided() const { return one_sided_; }
    std::size_t arrow_len() const { return arrow_len_; }

    /// J_k ((k+1) x k) and Jc_k (k x k).
    DenseMatrix j() const { return j_.block(0, 0, k_ + 1, k_); }
    DenseMatrix j_check() const { return jc_.block(0, 0, k_, k_); }
    double alpha_next() const { return j_(k_, k_); }
    double beta_check() const { return k_ == 0 ? 0.0 : jc_(k_ - 1, k_); }
    BidiagonalPair pair() const;

    const DenseMatrix& u() const { return u_; }        // m x (max_order + 1); k + 1 valid
    const DenseMatrix& u_hat() const { return uh_; }   // p x max_order; k valid
    const DenseMatrix& v_tilde() const { return v_; }  // (m + p) x (max_order + 1); k + 1 valid

    const OrthoCounter& ortho() const { return ortho_; }
    std::size_t ls_solves() const { return ls_solves_; }
    std::size_t ls_iterations() const { return ls_iterations_; }
    std::size_t breakdowns() const { return breakdowns_; }
    std::size_t steps() const { return steps_; }

private:
    Vector random_range_vector(std::size_t ncols);

    const StackedOperator& z_;
    const LeastSquaresSolver& ls_;
    std::size_t max_order_;
    bool one_sided_;
    SplitMix64 rng_;

    std::size_t k_ = 0;
    std::size_t arrow_len_ = 0;
    bool initialized_ = false;
    bool exhausted_ = false;
    DenseMatrix u_;
    DenseMatrix uh_;
    DenseMatrix v_;
    DenseMatrix j_;   // (max_order + 1) square, leading (k+1) x (k+1) used
    DenseMatrix jc_;  // (max_order + 1) square, leading k x (k+1) used

    OrthoCounter ortho_;
    std::size_t ls_solves_ = 0;
    std::size_t ls_iterations_ = 0;
    std::size_t breakdowns_ = 0;
    std::size_t steps_ = 0;
};

/// c_i / s_i, +inf when s_i is zero.
double cs_ratio(double c, double s);

/// Stable reorder of columns [first, k) of a CS decomposition by c/s,
/// descending for largest, ascending for smallest. Column k of x_big stays.
void sort_cs(CsDecomposition& cs, Which which, std::size_t first = 0);

/// CS decomposition of the current pair of jb, leaving the leading `nlock`
/// (decoupled) columns in place, sorted per `which` after them.
CsDecomposition decompose_pair(const JointBidiagonalization& jb, Which which, std::size_t nlock = 0);

struct ConvergenceCheck {
    Vector estimates;
    std::size_t nconv = 0;  // longest prefix with estimate < tol
};

/// estimate_i = sqrt((alpha_{k+1} X(k, i))^2 + (beta_check Xh(k-1, i))^2).
ConvergenceCheck check_convergence(const CsDecomposition& cs, double alpha_next, double beta_check, double tol);

GsvdResult gsvd_solve(const SparseMatrix& a, const SparseMatrix& b, const GsvdOptions& opts);

/// Maps a quadruple of the pair {A, gamma B} to one of {A, B}.
GsvdQuadruple recover_from_scaled(const GsvdQuadruple& q, double gamma);

/// Ratio of the relative gaps of the largest value after and before scaling.
double gap_ratio_largest(double c1, double cn, double gamma);
/// Same for the smallest value; the reciprocal of gap_ratio_largest.
double gap_ratio_smallest(double c1, double cn, double gamma);

/// ||s A^T u_a - c B^T u_b||_2.
double gsvd_residual(const SparseMatrix& a, const SparseMatrix& b, double c, double s, std::span<const double> u_a,
                     std::span<const double> u_b);

}  // namespace trgsvd
