#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "trgsvd/sparse.hpp"

namespace trgsvd {

struct MatrixPair {
    SparseMatrix a;
    SparseMatrix b;
};

/// A = C D, B = S D with c_i = (n - i + 1) / (2n), s_i = sqrt(1 - c_i^2) and
/// d_i = ceil(4 i / n) + r_i, r_i uniform on [0, 1) drawn from `seed` (i is 1-based).
MatrixPair gen_diagonal_problem(std::size_t n, std::uint64_t seed = 1);

/// (n+1) x n with 1 on the diagonal and -1 on the subdiagonal.
SparseMatrix gen_bidiagonal_regularizer(std::size_t n);

/// Each entry is nonzero with probability `density`, value uniform on [-1, 1).
SparseMatrix gen_random_sparse(std::size_t rows, std::size_t cols, double density, std::uint64_t seed);

/// Random pair with an identity added to the leading n x n block of B,
/// which keeps [A; B] well conditioned.
MatrixPair gen_random_pair(std::size_t m, std::size_t p, std::size_t n, std::uint64_t seed, double density = 0.3);

}  // namespace trgsvd
