#pragma once

#include <cstddef>
#include <vector>

#include "trgsvd/gsvd_solver.hpp"
#include "trgsvd/sparse.hpp"
#include "trgsvd/which.hpp"

namespace trgsvd {

enum class CyclicVariant { a_side, b_side };

/// Dense solution of the pencil (A^T A, B^T B); `smallest` goes through the
/// reversed pencil when A^T A is positive definite. g is scaled so that
/// ||[A; B] g|| = 1. u_a (u_b) is left empty when c (s) is below 1e-13.
std::vector<GsvdQuadruple> gsvd_cross(const SparseMatrix& a, const SparseMatrix& b, std::size_t nsv, Which which);

/// Dense solution of ([0 A; A^T 0], diag(I, B^T B)) (a_side) or
/// ([0 B; B^T 0], diag(I, A^T A)) (b_side), using the positive eigenvalues.
std::vector<GsvdQuadruple> gsvd_cyclic(const SparseMatrix& a, const SparseMatrix& b, std::size_t nsv, Which which,
                                       CyclicVariant variant = CyclicVariant::a_side);

}  // namespace trgsvd
