#pragma once

#include <cstddef>

#include "trgsvd/dense.hpp"

namespace trgsvd {

inline constexpr int kJacobiMaxSweeps = 30;

/// Thin SVD: u is m x r, v is n x r with r = min(m, n); sigma descending.
struct SvdResult {
    DenseMatrix u;
    Vector sigma;
    DenseMatrix v;
};

/// One-sided (Hestenes) Jacobi SVD.
SvdResult dense_svd(const DenseMatrix& m, int max_sweeps = kJacobiMaxSweeps);

/// Eigenvalues ascending; columns of `vectors` are the eigenvectors.
struct EigResult {
    Vector values;
    DenseMatrix vectors;
};

/// Cyclic two-sided Jacobi for a symmetric matrix.
EigResult sym_eig(const DenseMatrix& m, int max_sweeps = kJacobiMaxSweeps);

/// a v = lambda b v with b symmetric positive definite, via Cholesky
/// reduction. Eigenvectors are b-orthonormal.
EigResult symdef_geig(const DenseMatrix& a, const DenseMatrix& b);

/// Lower Cholesky factor; SemiDefiniteError when a pivot drops to
/// 1e-13 * ||b||_inf or below.
DenseMatrix cholesky(const DenseMatrix& b);

/// J = X [C; 0] Y^T and Jc = Xh S Y^T for a (k+1) x k / k x k pair with
/// J^T J + Jc^T Jc = I. Pairs come out with s ascending.
struct CsDecomposition {
    DenseMatrix x_big;  // (k+1) x (k+1)
    DenseMatrix x_hat;  // k x k
    DenseMatrix y;      // k x k
    Vector c;
    Vector s;

    std::size_t k() const { return c.size(); }
};

CsDecomposition cs_decompose(const DenseMatrix& j, const DenseMatrix& j_check);

/// Fill the columns of q with valid[c] == false so that all columns are
/// orthonormal, using coordinate vectors as candidates.
void complete_orthonormal(DenseMatrix& q, std::vector<bool> valid);

}  // namespace trgsvd
