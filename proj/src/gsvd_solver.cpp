#include "trgsvd/gsvd_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "trgsvd/error.hpp"

namespace trgsvd {

namespace {

std::span<const double> head(std::span<const double> v, std::size_t n) { return v.first(n); }
std::span<const double> tail(std::span<const double> v, std::size_t from) { return v.subspan(from); }

// One Gram-Schmidt step against a single unit vector.
void local_orthogonalize(Vector& v, std::span<const double> q, OrthoCounter& counter) {
    const double h = dot(q, v);
    axpy(-h, q, v);
    ++counter.inner_products;
    counter.flops += v.size();
}

void set_col(DenseMatrix& m, std::size_t j, std::span<const double> v) {
    std::copy(v.begin(), v.end(), m.col(j).begin());
}

}  // namespace

void GsvdOptions::validate() const {
    if (nsv == 0) throw InvalidArgument("nsv must be positive");
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (!(keep > 0.0 && keep < 1.0)) throw InvalidArgument("keep must lie in (0, 1)");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
    if (ncv != 0 && ncv <= nsv) throw InvalidArgument("ncv must exceed nsv");
    ls.validate();
}

bool GsvdResult::all_converged() const {
    return std::all_of(values.begin(), values.end(), [](const GsvdQuadruple& q) { return q.converged; });
}

JointBidiagonalization::JointBidiagonalization(const StackedOperator& z, const LeastSquaresSolver& ls,
                                               std::size_t max_order, bool one_sided, std::uint64_t seed)
    : z_(z),
      ls_(ls),
      max_order_(max_order),
      one_sided_(one_sided),
      rng_(seed),
      u_(z.m(), max_order + 1),
      uh_(z.p(), max_order),
      v_(z.rows(), max_order + 1),
      j_(max_order + 1, max_order + 1),
      jc_(max_order + 1, max_order + 1) {
    if (&ls.op() != &z) throw InvalidArgument("joint bidiagonalization: solver bound to a different operator");
    if (max_order == 0 || max_order > z.n()) throw InvalidArgument("joint bidiagonalization: order must lie in [1, n]");
}

Vector JointBidiagonalization::random_range_vector(std::size_t ncols) {
    for (int attempt = 0; attempt < 3; ++attempt) {
        Vector x(z_.n());
        rng_.fill_uniform(x);
        Vector y = z_.apply(x);
        const OrthoResult o = orthogonalize(y, v_, ncols, &ortho_);
        if (o.breakdown || o.norm_out < 1e-8 * o.norm_in) continue;
        scale(1.0 / o.norm_out, y);
        return y;
    }
    return {};
}

void JointBidiagonalization::init(std::span<const double> u1) {
    if (u1.size() != z_.m()) throw DimensionError("joint bidiagonalization: start vector length must equal rows of A");
    Vector u(u1.begin(), u1.end());
    if (normalize(u).breakdown) throw InvalidArgument("joint bidiagonalization: start vector is zero");
    u_ = DenseMatrix(z_.m(), max_order_ + 1);
    uh_ = DenseMatrix(z_.p(), max_order_);
    v_ = DenseMatrix(z_.rows(), max_order_ + 1);
    j_ = DenseMatrix(max_order_ + 1, max_order_ + 1);
    jc_ = DenseMatrix(max_order_ + 1, max_order_ + 1);
    set_col(u_, 0, u);

    Vector y = ls_.expand(u, &ls_iterations_);
    ++ls_solves_;
    const NormalizeResult n = normalize(y);
    if (n.breakdown)
        throw BreakdownError("start vector is orthogonal to the A-block of range([A; B]); choose another seed");
    set_col(v_, 0, y);
    j_(0, 0) = n.norm;
    k_ = 0;
    arrow_len_ = 0;
    exhausted_ = false;
    initialized_ = true;
}

void JointBidiagonalization::step() {
    if (!initialized_) throw InvalidArgument("joint bidiagonalization: init() must be called first");
    if (exhausted_) throw InvalidArgument("joint bidiagonalization: Krylov space exhausted");
    const std::size_t j = k_;
    if (j >= max_order_) throw InvalidArgument("joint bidiagonalization: maximum order reached");
    const std::size_t m = z_.m();
    const std::size_t p = z_.p();
    const std::span<const double> vt = v_.col(j);

    // Lower block: [0 I] v_j = sum_i Jc(i, j) uh_i.
    Vector wh(tail(vt, m).begin(), tail(vt, m).end());
    for (std::size_t i = 0; i < j; ++i)
        if (jc_(i, j) != 0.0) axpy(-jc_(i, j), uh_.col(i), wh);
    if (!one_sided_) {
        orthogonalize(wh, uh_, j, &ortho_);
    } else if (j > 0) {
        // One-sided: local pass, full pass against the kept basis right after a restart.
        if (j == arrow_len_) orthogonalize(wh, uh_, j, &ortho_);
        else local_orthogonalize(wh, uh_.col(j - 1), ortho_);
    }
    const double ah = norm2(wh);
    if (ah < kHatDivisionTol) {
        ++breakdowns_;
        jc_(j, j) = 0.0;
        auto r = random_orthogonal_vector(p, uh_, j, rng_, &ortho_);
        if (r) {
            set_col(uh_, j, *r);
        } else {
            std::fill(uh_.col(j).begin(), uh_.col(j).end(), 0.0);
        }
    } else {
        const double d = BidiagonalPair::parity(j) * ah;
        jc_(j, j) = d;
        scale(1.0 / d, wh);
        set_col(uh_, j, wh);
    }

    // Upper block: [I 0] v_j = sum_i J(i, j) u_i, always fully orthogonalized.
    Vector w(head(vt, m).begin(), head(vt, m).end());
    for (std::size_t i = 0; i <= j; ++i)
        if (j_(i, j) != 0.0) axpy(-j_(i, j), u_.col(i), w);
    orthogonalize(w, u_, j + 1, &ortho_);
    const NormalizeResult nb = normalize(w);
    double beta = nb.norm;
    if (nb.breakdown) {
        ++breakdowns_;
        beta = 0.0;
        auto r = random_orthogonal_vector(m, u_, j + 1, rng_, &ortho_);
        if (r) {
            w = std::move(*r);
        } else {
            std::fill(w.begin(), w.end(), 0.0);
        }
    }
    j_(j + 1, j) = beta;
    set_col(u_, j + 1, w);

    // Next right vector: P([u_{j+1}; 0] - beta v_j) = expand(u_{j+1}) - beta v_j.
    Vector rhs(z_.rows());
    for (std::size_t i = 0; i < m; ++i) rhs[i] = w[i] - beta * v_(i, j);
    for (std::size_t i = m; i < z_.rows(); ++i) rhs[i] = -beta * v_(i, j);
    Vector y = ls_.project(rhs, &ls_iterations_);
    ++ls_solves_;
    if (one_sided_) {
        // Same policy as the lower block.
        if (j == arrow_len_) orthogonalize(y, v_, j + 1, &ortho_);
        else local_orthogonalize(y, v_.col(j), ortho_);
    } else {
        orthogonalize(y, v_, j + 1, &ortho_);
    }
    const NormalizeResult na = normalize(y);
    double alpha = na.norm;
    if (na.breakdown) {
        ++breakdowns_;
        alpha = 0.0;
        y = random_range_vector(j + 1);
        if (y.empty()) {
            y.assign(z_.rows(), 0.0);
            exhausted_ = true;
        }
    }
    j_(j + 1, j + 1) = alpha;
    set_col(v_, j + 1, y);

    // Orthogonality of columns j and j+1 of [J; Jc] fixes Jc(j, j+1).
    if (jc_(j, j) != 0.0) {
        jc_(j, j + 1) = -beta * alpha / jc_(j, j);
    } else {
        jc_(j, j + 1) = dot(uh_.col(j), tail(v_.col(j + 1), m));
    }
    k_ = j + 1;
    ++steps_;
}

void JointBidiagonalization::extend(std::size_t to) {
    if (to > max_order_) throw InvalidArgument("joint bidiagonalization: cannot extend beyond max_order");
    while (k_ < to && !exhausted_) step();
}

void JointBidiagonalization::truncate(const CsDecomposition& cs, std::size_t r, std::size_t nlock) {
    const std::size_t k = k_;
    if (cs.k() != k) throw DimensionError("truncate: decomposition does not match the current order");
    if (r == 0 || r >= k) throw InvalidArgument("truncate: restart size must lie in [1, k)");
    if (nlock > r) throw InvalidArgument("truncate: more locked columns than kept columns");
    const double an = alpha_next();
    const double bc = beta_check();

    DenseMatrix un(u_.rows(), max_order_ + 1);
    DenseMatrix uhn(uh_.rows(), max_order_);
    DenseMatrix vn(v_.rows(), max_order_ + 1);
    for (std::size_t i = 0; i < r; ++i) {
        set_col(un, i, combine_columns(u_, k + 1, cs.x_big.col(i)));
        set_col(uhn, i, combine_columns(uh_, k, cs.x_hat.col(i)));
        set_col(vn, i, combine_columns(v_, k, cs.y.col(i)));
    }
    set_col(un, r, combine_columns(u_, k + 1, cs.x_big.col(k)));
    set_col(vn, r, v_.col(k));

    DenseMatrix jn(max_order_ + 1, max_order_ + 1);
    DenseMatrix jcn(max_order_ + 1, max_order_ + 1);
    for (std::size_t i = 0; i < r; ++i) {
        jn(i, i) = cs.c[i];
        jcn(i, i) = cs.s[i];
        if (i >= nlock) {
            jn(i, r) = an * cs.x_big(k, i);
            jcn(i, r) = bc * cs.x_hat(k - 1, i);
        }
    }
    jn(r, r) = an * cs.x_big(k, k);

    u_ = std::move(un);
    uh_ = std::move(uhn);
    v_ = std::move(vn);
    j_ = std::move(jn);
    jc_ = std::move(jcn);
    k_ = r;
    arrow_len_ = r;
}

BidiagonalPair JointBidiagonalization::pair() const {
    BidiagonalPair bp;
    bp.k = k_;
    bp.arrow_len = arrow_len_;
    for (std::size_t i = 0; i <= k_; ++i) bp.alpha.push_back(j_(i, i));
    for (std::size_t i = 0; i < k_; ++i) bp.beta.push_back(j_(i + 1, i));
    for (std::size_t i = 0; i < k_; ++i) bp.alpha_hat.push_back(std::fabs(jc_(i, i)));
    for (std::size_t i = 0; i + 1 < k_; ++i) bp.beta_hat.push_back(std::fabs(jc_(i, i + 1)));
    bp.beta_check = beta_check();
    const std::size_t r = std::min(arrow_len_, k_);
    for (std::size_t i = 0; i < r; ++i) {
        bp.arrow_c.push_back(j_(i, i));
        bp.arrow_s.push_back(jc_(i, i));
        bp.arrow_spike.push_back(j_(i, r));
        bp.arrow_spike_hat.push_back(jc_(i, r));
    }
    if (r > 0) bp.arrow_spike.push_back(j_(r, r));
    return bp;
}

double cs_ratio(double c, double s) { return s > 0.0 ? c / s : std::numeric_limits<double>::infinity(); }

void sort_cs(CsDecomposition& cs, Which which, std::size_t first) {
    const std::size_t k = cs.k();
    if (first >= k) return;
    std::vector<std::size_t> idx(k - first);
    std::iota(idx.begin(), idx.end(), first);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double ra = cs_ratio(cs.c[a], cs.s[a]);
        const double rb = cs_ratio(cs.c[b], cs.s[b]);
        return which == Which::largest ? ra > rb : ra < rb;
    });
    const CsDecomposition old = cs;
    for (std::size_t t = 0; t < idx.size(); ++t) {
        const std::size_t dst = first + t;
        const std::size_t src = idx[t];
        cs.c[dst] = old.c[src];
        cs.s[dst] = old.s[src];
        set_col(cs.x_big, dst, old.x_big.col(src));
        set_col(cs.x_hat, dst, old.x_hat.col(src));
        set_col(cs.y, dst, old.y.col(src));
    }
}

CsDecomposition decompose_pair(const JointBidiagonalization& jb, Which which, std::size_t nlock) {
    const std::size_t k = jb.order();
    if (nlock > k) throw InvalidArgument("decompose_pair: more locked columns than the current order");
    const DenseMatrix j = jb.j();
    const DenseMatrix jc = jb.j_check();
    if (nlock == 0) {
        CsDecomposition cs = cs_decompose(j, jc);
        sort_cs(cs, which);
        return cs;
    }
    const std::size_t ka = k - nlock;
    const CsDecomposition act = cs_decompose(j.block(nlock, nlock, ka + 1, ka), jc.block(nlock, nlock, ka, ka));
    CsDecomposition cs;
    cs.x_big = DenseMatrix::identity(k + 1);
    cs.x_hat = DenseMatrix::identity(k);
    cs.y = DenseMatrix::identity(k);
    cs.c.assign(k, 0.0);
    cs.s.assign(k, 0.0);
    for (std::size_t i = 0; i < nlock; ++i) {
        cs.c[i] = j(i, i);
        cs.s[i] = jc(i, i);
    }
    for (std::size_t b = 0; b < ka; ++b) {
        cs.c[nlock + b] = act.c[b];
        cs.s[nlock + b] = act.s[b];
        for (std::size_t a = 0; a < ka; ++a) {
            cs.x_hat(nlock + a, nlock + b) = act.x_hat(a, b);
            cs.y(nlock + a, nlock + b) = act.y(a, b);
        }
    }
    for (std::size_t b = 0; b <= ka; ++b)
        for (std::size_t a = 0; a <= ka; ++a) cs.x_big(nlock + a, nlock + b) = act.x_big(a, b);
    sort_cs(cs, which, nlock);
    return cs;
}

ConvergenceCheck check_convergence(const CsDecomposition& cs, double alpha_next, double beta_check, double tol) {
    const std::size_t k = cs.k();
    ConvergenceCheck cc;
    cc.estimates.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        cc.estimates[i] = std::hypot(alpha_next * cs.x_big(k, i), beta_check * cs.x_hat(k - 1, i));
    while (cc.nconv < k && cc.estimates[cc.nconv] < tol) ++cc.nconv;
    return cc;
}

double gsvd_residual(const SparseMatrix& a, const SparseMatrix& b, double c, double s, std::span<const double> u_a,
                     std::span<const double> u_b) {
    Vector r = spmv_transpose(a, u_a);
    scale(s, r);
    if (!u_b.empty()) axpy(-c, spmv_transpose(b, u_b), r);
    return norm2(r);
}

GsvdQuadruple recover_from_scaled(const GsvdQuadruple& q, double gamma) {
    if (!(gamma > 0.0)) throw InvalidArgument("recover_from_scaled: gamma must be positive");
    GsvdQuadruple r = q;
    if (q.infinite || q.s < kInfiniteTol) {
        r.infinite = true;
        r.sigma = std::numeric_limits<double>::infinity();
        r.c = 1.0;
        r.s = 0.0;
        return r;
    }
    const double sigma = gamma * q.c / q.s;
    const double h = std::sqrt(1.0 + sigma * sigma);
    r.sigma = sigma;
    r.infinite = false;
    r.c = sigma / h;
    r.s = 1.0 / h;
    scale(std::sqrt(r.c * r.c + gamma * gamma * r.s * r.s), r.g);
    return r;
}

double gap_ratio_largest(double c1, double cn, double gamma) {
    const double g2 = gamma * gamma;
    return (cn * cn + g2 * (1.0 - cn * cn)) / (c1 * c1 + g2 * (1.0 - c1 * c1));
}

double gap_ratio_smallest(double c1, double cn, double gamma) { return 1.0 / gap_ratio_largest(c1, cn, gamma); }

GsvdResult gsvd_solve(const SparseMatrix& a, const SparseMatrix& b, const GsvdOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    opts.validate();
    const StackedOperator z(a, b, opts.gamma);
    const std::size_t n = z.n();
    if (opts.nsv > n) throw InvalidArgument("nsv exceeds the number of columns");
    std::size_t ncv = opts.ncv ? opts.ncv : std::max<std::size_t>(2 * opts.nsv, 10);
    ncv = std::min(ncv, n);
    if (ncv < opts.nsv || (ncv == opts.nsv && ncv < n)) throw InvalidArgument("ncv must exceed nsv");

    const LeastSquaresSolver ls(z, opts.ls);
    SplitMix64 rng(opts.seed);
    Vector u1(z.m());
    rng.fill_uniform(u1);
    JointBidiagonalization jb(z, ls, ncv, opts.one_sided, rng.next());
    jb.init(u1);

    GsvdResult res;
    CsDecomposition cs;
    ConvergenceCheck cc;
    std::size_t nlock = 0;
    Vector locked_est;
    for (std::size_t restart = 0;; ++restart) {
        jb.extend(ncv);
        const std::size_t k = jb.order();
        cs = decompose_pair(jb, opts.which, nlock);
        cc = check_convergence(cs, jb.alpha_next(), jb.beta_check(), opts.tol);
        for (std::size_t i = 0; i < nlock; ++i) cc.estimates[i] = locked_est[i];
        cc.nconv = 0;
        while (cc.nconv < k && cc.estimates[cc.nconv] < opts.tol) ++cc.nconv;
        res.stats.restarts = restart;
        if (cc.nconv >= opts.nsv || restart >= opts.max_restarts || jb.exhausted() || k == n) break;

        std::size_t r = cc.nconv + static_cast<std::size_t>(std::ceil(opts.keep * static_cast<double>(k - cc.nconv)));
        r = std::clamp<std::size_t>(r, 1, k - 1);
        if (opts.locking) {
            nlock = std::min(cc.nconv, r);
            locked_est.assign(cc.estimates.begin(), cc.estimates.begin() + static_cast<std::ptrdiff_t>(nlock));
        }
        jb.truncate(cs, r, nlock);
    }

    const std::size_t k = jb.order();
    const std::size_t nout = std::min(opts.nsv, k);
    const double znorm = std::max(inf_norm(a), inf_norm(b));
    SparseMatrix gb = b.scaled(opts.gamma);
    for (std::size_t i = 0; i < nout; ++i) {
        GsvdQuadruple q;
        q.c = cs.c[i];
        q.s = cs.s[i];
        q.infinite = q.s < kInfiniteTol;
        q.sigma = q.infinite ? std::numeric_limits<double>::infinity() : q.c / q.s;
        q.u_a = combine_columns(jb.u(), k + 1, cs.x_big.col(i));
        q.u_b = combine_columns(jb.u_hat(), k, cs.x_hat.col(i));
        const Vector vt = combine_columns(jb.v_tilde(), k, cs.y.col(i));
        const LsResult g = ls.solve(vt);
        ++res.stats.ls_solves;
        res.stats.ls_iterations += g.iterations;
        q.g = g.x;
        q.residual_estimate = cc.estimates[i];
        q.converged = cc.estimates[i] < opts.tol;
        q.residual = gsvd_residual(a, gb, q.c, q.s, q.u_a, q.u_b);
        if (opts.gamma != 1.0) q = recover_from_scaled(q, opts.gamma);
        q.relative_residual = znorm > 0.0 ? gsvd_residual(a, b, q.c, q.s, q.u_a, q.u_b) / znorm : 0.0;
        res.values.push_back(std::move(q));
    }
    std::stable_sort(res.values.begin(), res.values.end(), [&](const GsvdQuadruple& x, const GsvdQuadruple& y) {
        return opts.which == Which::largest ? x.sigma > y.sigma : x.sigma < y.sigma;
    });

    res.stats.nconv = std::min(cc.nconv, opts.nsv);
    res.stats.steps = jb.steps();
    res.stats.ls_solves += jb.ls_solves();
    res.stats.ls_iterations += jb.ls_iterations();
    res.stats.breakdowns = jb.breakdowns();
    res.stats.ortho = jb.ortho();
    res.stats.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace trgsvd
