#include "trgsvd/svd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "trgsvd/error.hpp"

namespace trgsvd {

namespace {

double triple_residual(const SparseMatrix& a, double sigma, std::span<const double> u, std::span<const double> v) {
    Vector av = spmv(a, v);
    Vector atu = spmv_transpose(a, u);
    for (std::size_t i = 0; i < av.size(); ++i) av[i] -= sigma * u[i];
    for (std::size_t i = 0; i < atu.size(); ++i) atu[i] -= sigma * v[i];
    return std::hypot(norm2(av), norm2(atu));
}

struct Sorted {
    DenseMatrix x;
    DenseMatrix y;
    Vector sigma;
};

Sorted sort_projected(const SvdResult& sv, Which which) {
    const std::size_t k = sv.sigma.size();
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (which == Which::smallest)
        std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return sv.sigma[i] < sv.sigma[j]; });
    Sorted s{DenseMatrix(sv.u.rows(), k), DenseMatrix(sv.v.rows(), k), Vector(k)};
    for (std::size_t t = 0; t < k; ++t) {
        s.sigma[t] = sv.sigma[idx[t]];
        std::copy(sv.u.col(idx[t]).begin(), sv.u.col(idx[t]).end(), s.x.col(t).begin());
        std::copy(sv.v.col(idx[t]).begin(), sv.v.col(idx[t]).end(), s.y.col(t).begin());
    }
    return s;
}

}  // namespace

LanczosBidiagonalization::LanczosBidiagonalization(const SparseMatrix& a, std::span<const double> q1,
                                                   std::size_t max_order, std::uint64_t seed)
    : a_(a),
      max_order_(max_order),
      p_(a.nrows(), max_order),
      q_(a.ncols(), max_order + 1),
      b_(max_order, max_order),
      breakdown_tol_(kBreakdownTol * inf_norm(a)),
      rng_(seed) {
    if (q1.size() != a.ncols()) throw DimensionError("lanczos: start vector length must equal columns of A");
    if (max_order == 0 || max_order > std::min(a.nrows(), a.ncols()))
        throw InvalidArgument("lanczos: order must lie in [1, min(m, n)]");
    const double nq = norm2(q1);
    if (!(nq > 0.0)) throw InvalidArgument("lanczos: start vector is zero");
    auto q0 = q_.col(0);
    for (std::size_t i = 0; i < q1.size(); ++i) q0[i] = q1[i] / nq;
}

void LanczosBidiagonalization::step(std::size_t j) {
    Vector w = spmv(a_, q_.col(j));
    const OrthoResult o = orthogonalize(w, p_, j, &ortho_);
    for (std::size_t i = 0; i < j; ++i) b_(i, j) = o.coeffs[i];
    const NormalizeResult na = normalize(w, breakdown_tol_);
    double alpha = na.norm;
    if (na.breakdown) {
        ++breakdowns_;
        alpha = 0.0;
        auto r = random_orthogonal_vector(w.size(), p_, j, rng_, &ortho_);
        if (r) {
            w = std::move(*r);
        } else {
            std::fill(w.begin(), w.end(), 0.0);
            exhausted_ = true;
        }
    }
    b_(j, j) = alpha;
    std::copy(w.begin(), w.end(), p_.col(j).begin());

    Vector z = spmv_transpose(a_, p_.col(j));
    axpy(-alpha, q_.col(j), z);
    orthogonalize(z, q_, j + 1, &ortho_);
    const NormalizeResult nb = normalize(z, breakdown_tol_);
    double beta = nb.norm;
    if (nb.breakdown) {
        ++breakdowns_;
        beta = 0.0;
        auto r = random_orthogonal_vector(z.size(), q_, j + 1, rng_, &ortho_);
        if (r) {
            z = std::move(*r);
        } else {
            std::fill(z.begin(), z.end(), 0.0);
            exhausted_ = true;
        }
    }
    beta_last_ = beta;
    std::copy(z.begin(), z.end(), q_.col(j + 1).begin());
}

void LanczosBidiagonalization::extend(std::size_t to) {
    if (to > max_order_) throw InvalidArgument("lanczos: cannot extend beyond max_order");
    for (std::size_t j = k_; j < to; ++j) {
        step(j);
        k_ = j + 1;
    }
}

void LanczosBidiagonalization::truncate(const DenseMatrix& x, const DenseMatrix& y, std::span<const double> sigma,
                                        std::size_t r) {
    if (r == 0 || r >= k_) throw InvalidArgument("lanczos: restart size out of range");
    if (x.rows() != k_ || y.rows() != k_ || x.cols() < r || y.cols() < r || sigma.size() < r)
        throw DimensionError("lanczos: truncation factors do not match the current order");
    const std::size_t m = p_.rows();
    const std::size_t n = q_.rows();
    DenseMatrix pn(m, max_order_);
    DenseMatrix qn(n, max_order_ + 1);
    for (std::size_t t = 0; t < r; ++t) {
        Vector pc = combine_columns(p_, k_, x.col(t));
        Vector qc = combine_columns(q_, k_, y.col(t));
        std::copy(pc.begin(), pc.end(), pn.col(t).begin());
        std::copy(qc.begin(), qc.end(), qn.col(t).begin());
    }
    std::copy(q_.col(k_).begin(), q_.col(k_).end(), qn.col(r).begin());
    spikes_.assign(r, 0.0);
    for (std::size_t t = 0; t < r; ++t) spikes_[t] = beta_last_ * x(k_ - 1, t);
    p_ = std::move(pn);
    q_ = std::move(qn);
    b_ = DenseMatrix(max_order_, max_order_);
    for (std::size_t t = 0; t < r; ++t) b_(t, t) = sigma[t];
    k_ = r;
}

SvdSolveResult svd_solve(const SparseMatrix& a, const SvdOptions& opts) {
    const std::size_t mn = std::min(a.nrows(), a.ncols());
    if (opts.nsv == 0) throw InvalidArgument("svd_solve: nsv must be positive");
    if (opts.nsv > mn) throw InvalidArgument("svd_solve: nsv exceeds min(m, n)");
    if (!(opts.keep > 0.0 && opts.keep < 1.0)) throw InvalidArgument("svd_solve: keep must lie in (0, 1)");
    if (!(opts.tol > 0.0)) throw InvalidArgument("svd_solve: tol must be positive");
    std::size_t ncv = opts.ncv ? opts.ncv : std::max<std::size_t>(2 * opts.nsv, 10);
    ncv = std::min(ncv, mn);
    if (ncv < opts.nsv || (ncv == opts.nsv && ncv < mn)) throw InvalidArgument("svd_solve: ncv must exceed nsv");

    SplitMix64 rng(opts.seed);
    Vector q1(a.ncols());
    rng.fill_uniform(q1);
    LanczosBidiagonalization lb(a, q1, ncv, rng.next());

    SvdSolveResult res;
    Sorted cur;
    Vector est;
    for (std::size_t restart = 0;; ++restart) {
        lb.extend(ncv);
        const std::size_t k = lb.order();
        cur = sort_projected(dense_svd(lb.projected()), opts.which);
        est.assign(k, 0.0);
        for (std::size_t t = 0; t < k; ++t) est[t] = lb.beta_last() * std::fabs(cur.x(k - 1, t));
        std::size_t nconv = 0;
        while (nconv < k && est[nconv] < opts.tol) ++nconv;
        res.nconv = std::min(nconv, opts.nsv);
        res.restarts = restart;
        if (nconv >= opts.nsv || restart >= opts.max_restarts || k == mn) break;
        std::size_t r = nconv + static_cast<std::size_t>(std::ceil(opts.keep * static_cast<double>(k - nconv)));
        r = std::clamp<std::size_t>(r, 1, k - 1);
        lb.truncate(cur.x, cur.y, cur.sigma, r);
    }

    const std::size_t k = lb.order();
    for (std::size_t t = 0; t < opts.nsv; ++t) {
        SvdTriple tr;
        tr.sigma = cur.sigma[t];
        tr.u = combine_columns(lb.p(), k, cur.x.col(t));
        tr.v = combine_columns(lb.q(), k, cur.y.col(t));
        normalize(tr.u);
        normalize(tr.v);
        tr.residual_estimate = est[t];
        tr.converged = est[t] < opts.tol;
        tr.residual = triple_residual(a, tr.sigma, tr.u, tr.v);
        res.triples.push_back(std::move(tr));
    }
    res.ortho = lb.ortho();
    return res;
}

namespace {

std::vector<std::size_t> pick(std::size_t count, std::size_t nsv, Which which) {
    // Indices into an ascending list of the nonnegative spectrum, best first.
    std::vector<std::size_t> idx;
    for (std::size_t t = 0; t < nsv; ++t) idx.push_back(which == Which::largest ? count - 1 - t : t);
    return idx;
}

void check_dense_request(const SparseMatrix& a, std::size_t nsv) {
    const std::size_t mn = std::min(a.nrows(), a.ncols());
    if (nsv == 0 || nsv > mn) throw InvalidArgument("nsv must lie in [1, min(m, n)]");
}

}  // namespace

std::vector<SvdTriple> svd_cross(const SparseMatrix& a, std::size_t nsv, Which which) {
    check_dense_request(a, nsv);
    const DenseMatrix ad = a.to_dense();
    const bool tall = a.nrows() >= a.ncols();
    const DenseMatrix gram = tall ? matmul_tn(ad, ad) : matmul_tn(ad.transpose(), ad.transpose());
    const EigResult e = sym_eig(gram);
    const double zero_tol = 1e-13 * inf_norm(a);

    std::vector<SvdTriple> out;
    for (std::size_t i : pick(e.values.size(), nsv, which)) {
        SvdTriple t;
        t.sigma = std::sqrt(std::max(e.values[i], 0.0));
        Vector w(e.vectors.col(i).begin(), e.vectors.col(i).end());
        if (t.sigma > zero_tol) {
            Vector other = tall ? spmv(a, w) : spmv_transpose(a, w);
            scale(1.0 / t.sigma, other);
            if (tall) {
                t.v = std::move(w);
                t.u = std::move(other);
            } else {
                t.u = std::move(w);
                t.v = std::move(other);
            }
            t.residual = triple_residual(a, t.sigma, t.u, t.v);
        } else if (tall) {
            t.v = std::move(w);
        } else {
            t.u = std::move(w);
        }
        t.converged = true;
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<SvdTriple> svd_cyclic(const SparseMatrix& a, std::size_t nsv, Which which) {
    check_dense_request(a, nsv);
    const std::size_t m = a.nrows();
    const std::size_t n = a.ncols();
    const DenseMatrix ad = a.to_dense();
    DenseMatrix h(m + n, m + n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            h(i, m + j) = ad(i, j);
            h(m + j, i) = ad(i, j);
        }
    const EigResult e = sym_eig(h);
    const std::size_t mn = std::min(m, n);
    const double zero_tol = 1e-13 * inf_norm(a);
    const double root2 = std::sqrt(2.0);

    std::vector<SvdTriple> out;
    // The top min(m, n) eigenvalues are the singular values.
    for (std::size_t t : pick(mn, nsv, which)) {
        const std::size_t i = m + n - mn + t;
        SvdTriple tr;
        tr.sigma = std::max(e.values[i], 0.0);
        if (tr.sigma > zero_tol) {
            auto w = e.vectors.col(i);
            tr.u.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(m));
            tr.v.assign(w.begin() + static_cast<std::ptrdiff_t>(m), w.end());
            scale(root2, tr.u);
            scale(root2, tr.v);
            tr.residual = triple_residual(a, tr.sigma, tr.u, tr.v);
        }
        tr.converged = true;
        out.push_back(std::move(tr));
    }
    return out;
}

}  // namespace trgsvd
