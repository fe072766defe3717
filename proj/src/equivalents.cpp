#include "trgsvd/equivalents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trgsvd/dense_kernels.hpp"
#include "trgsvd/error.hpp"

namespace trgsvd {

namespace {

constexpr double kVectorTol = 1e-13;

void check_request(const SparseMatrix& a, const SparseMatrix& b, std::size_t nsv) {
    if (a.ncols() != b.ncols()) throw DimensionError("A and B must have the same number of columns");
    if (nsv == 0 || nsv > a.ncols()) throw InvalidArgument("nsv must lie in [1, n]");
}

DenseMatrix gram(const SparseMatrix& m) {
    const DenseMatrix d = m.to_dense();
    return matmul_tn(d, d);
}

bool positive_definite(const DenseMatrix& m) {
    try {
        cholesky(m);
        return true;
    } catch (const SemiDefiniteError&) {
        return false;
    }
}

// Fills sigma, vectors and residuals from (c, s, g) with ||Z g|| = 1.
GsvdQuadruple finish(const SparseMatrix& a, const SparseMatrix& b, double c, double s, Vector g) {
    GsvdQuadruple q;
    const double h = std::hypot(c, s);
    q.c = c / h;
    q.s = s / h;
    q.infinite = q.s < kInfiniteTol;
    q.sigma = q.infinite ? std::numeric_limits<double>::infinity() : q.c / q.s;
    if (q.c >= kVectorTol) {
        q.u_a = spmv(a, g);
        scale(1.0 / q.c, q.u_a);
    }
    if (q.s >= kVectorTol) {
        q.u_b = spmv(b, g);
        scale(1.0 / q.s, q.u_b);
    }
    q.g = std::move(g);
    q.converged = true;
    if (!q.u_a.empty() && !q.u_b.empty()) {
        q.residual = gsvd_residual(a, b, q.c, q.s, q.u_a, q.u_b);
        const double znorm = std::max(inf_norm(a), inf_norm(b));
        q.relative_residual = znorm > 0.0 ? q.residual / znorm : 0.0;
    }
    return q;
}

}  // namespace

std::vector<GsvdQuadruple> gsvd_cross(const SparseMatrix& a, const SparseMatrix& b, std::size_t nsv, Which which) {
    check_request(a, b, nsv);
    const std::size_t n = a.ncols();
    const DenseMatrix ata = gram(a);
    const DenseMatrix btb = gram(b);
    std::vector<GsvdQuadruple> out;

    if (which == Which::smallest && positive_definite(ata)) {
        // mu = 1 / sigma^2, largest mu first; eigenvectors are A^T A-orthonormal.
        const EigResult e = symdef_geig(btb, ata);
        for (std::size_t t = 0; t < nsv; ++t) {
            const std::size_t i = n - 1 - t;
            const double mu = std::max(e.values[i], 0.0);
            Vector g(e.vectors.col(i).begin(), e.vectors.col(i).end());
            scale(1.0 / std::sqrt(1.0 + mu), g);
            out.push_back(finish(a, b, 1.0 / std::sqrt(1.0 + mu), std::sqrt(mu / (1.0 + mu)), std::move(g)));
        }
        return out;
    }

    const EigResult e = symdef_geig(ata, btb);
    for (std::size_t t = 0; t < nsv; ++t) {
        const std::size_t i = which == Which::largest ? n - 1 - t : t;
        const double lambda = std::max(e.values[i], 0.0);
        Vector g(e.vectors.col(i).begin(), e.vectors.col(i).end());
        scale(1.0 / std::sqrt(1.0 + lambda), g);
        out.push_back(finish(a, b, std::sqrt(lambda / (1.0 + lambda)), 1.0 / std::sqrt(1.0 + lambda), std::move(g)));
    }
    return out;
}

std::vector<GsvdQuadruple> gsvd_cyclic(const SparseMatrix& a, const SparseMatrix& b, std::size_t nsv, Which which,
                                       CyclicVariant variant) {
    check_request(a, b, nsv);
    const bool a_side = variant == CyclicVariant::a_side;
    const SparseMatrix& top = a_side ? a : b;
    const SparseMatrix& other = a_side ? b : a;
    const std::size_t r = top.nrows();
    const std::size_t n = top.ncols();

    const DenseMatrix td = top.to_dense();
    DenseMatrix k(r + n, r + n);
    DenseMatrix mass(r + n, r + n);
    for (std::size_t i = 0; i < r; ++i) mass(i, i) = 1.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < r; ++i) {
            k(i, r + j) = td(i, j);
            k(r + j, i) = td(i, j);
        }
    const DenseMatrix og = gram(other);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) mass(r + i, r + j) = og(i, j);

    const EigResult e = symdef_geig(k, mass);
    const double root2 = std::sqrt(2.0);
    // The top n eigenvalues, ascending: positions r .. r + n - 1.
    const bool take_top = (which == Which::largest) == a_side;
    std::vector<GsvdQuadruple> out;
    for (std::size_t t = 0; t < nsv; ++t) {
        const std::size_t i = take_top ? r + n - 1 - t : r + t;
        const double tau = std::max(e.values[i], 0.0);
        const double first = 1.0 / std::sqrt(1.0 + tau * tau);  // s (a_side) or c (b_side)
        Vector g(n);
        for (std::size_t l = 0; l < n; ++l) g[l] = root2 * first * e.vectors(r + l, i);
        if (a_side) {
            out.push_back(finish(a, b, tau * first, first, std::move(g)));
        } else {
            out.push_back(finish(a, b, first, tau * first, std::move(g)));
        }
    }
    return out;
}

}  // namespace trgsvd
