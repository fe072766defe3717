#include "trgsvd/problems.hpp"

#include <cmath>
#include <vector>

#include "trgsvd/error.hpp"
#include "trgsvd/random.hpp"

namespace trgsvd {

MatrixPair gen_diagonal_problem(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidArgument("diagonal problem needs n >= 1");
    SplitMix64 rng(seed);
    std::vector<double> av(n), bv(n);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double c = static_cast<double>(n - i + 1) / (2.0 * dn);
        const double s = std::sqrt(1.0 - c * c);
        const double d = std::ceil(4.0 * static_cast<double>(i) / dn) + rng.uniform();
        av[i - 1] = c * d;
        bv[i - 1] = s * d;
    }
    return {SparseMatrix::diagonal(av), SparseMatrix::diagonal(bv)};
}

SparseMatrix gen_bidiagonal_regularizer(std::size_t n) {
    if (n == 0) throw InvalidArgument("bidiagonal regularizer needs n >= 1");
    std::vector<Triplet> t;
    t.reserve(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        t.push_back({j, j, 1.0});
        t.push_back({j + 1, j, -1.0});
    }
    return SparseMatrix::from_triplets(n + 1, n, t);
}

SparseMatrix gen_random_sparse(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
    if (!(density >= 0.0 && density <= 1.0)) throw InvalidArgument("density must lie in [0, 1]");
    SplitMix64 rng(seed);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double keep = rng.uniform();
            const double value = rng.uniform(-1.0, 1.0);
            if (keep < density) t.push_back({i, j, value});
        }
    return SparseMatrix::from_triplets(rows, cols, t);
}

MatrixPair gen_random_pair(std::size_t m, std::size_t p, std::size_t n, std::uint64_t seed, double density) {
    SplitMix64 rng(seed);
    const std::uint64_t sa = rng.next();
    const std::uint64_t sb = rng.next();
    SparseMatrix a = gen_random_sparse(m, n, density, sa);
    const SparseMatrix braw = gen_random_sparse(p, n, density, sb);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = braw.row_offsets()[i]; k < braw.row_offsets()[i + 1]; ++k)
            t.push_back({i, braw.col_indices()[k], braw.values()[k]});
    for (std::size_t i = 0; i < std::min(p, n); ++i) t.push_back({i, i, 1.0});
    return {std::move(a), SparseMatrix::from_triplets(p, n, t)};
}

}  // namespace trgsvd
