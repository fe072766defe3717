#include "trgsvd/dense_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "trgsvd/error.hpp"
#include "trgsvd/orthogonalization.hpp"

namespace trgsvd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double matrix_inf_norm(const DenseMatrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

void require_symmetric(const DenseMatrix& a, const char* what) {
    if (a.rows() != a.cols()) throw DimensionError(std::string(what) + ": matrix must be square");
    const double scale = max_abs(a);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = j + 1; i < a.rows(); ++i)
            if (std::fabs(a(i, j) - a(j, i)) > 1e-12 * scale)
                throw InvalidArgument(std::string(what) + ": matrix is not symmetric");
}

std::vector<std::size_t> stable_order(const Vector& keys, bool descending) {
    std::vector<std::size_t> idx(keys.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return descending ? keys[x] > keys[y] : keys[x] < keys[y];
    });
    return idx;
}

// Solves L x = b in place.
void forward_solve(const DenseMatrix& l, std::span<double> b) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
        b[i] = s / l(i, i);
    }
}

// Solves L^T x = b in place.
void backward_solve_t(const DenseMatrix& l, std::span<double> b) {
    const std::size_t n = l.rows();
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * b[k];
        b[ii] = s / l(ii, ii);
    }
}

}  // namespace

void complete_orthonormal(DenseMatrix& q, std::vector<bool> valid) {
    const std::size_t n = q.rows();
    if (valid.size() != q.cols()) throw DimensionError("complete_orthonormal: flag count mismatch");
    if (q.cols() > n) throw DimensionError("complete_orthonormal: more columns than rows");
    DenseMatrix basis(n, q.cols());
    std::size_t nb = 0;
    for (std::size_t j = 0; j < q.cols(); ++j) {
        if (!valid[j]) continue;
        std::copy(q.col(j).begin(), q.col(j).end(), basis.col(nb).begin());
        ++nb;
    }
    for (std::size_t j = 0; j < q.cols(); ++j) {
        if (valid[j]) continue;
        Vector best;
        double best_norm = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            Vector e(n, 0.0);
            e[i] = 1.0;
            const OrthoResult o = orthogonalize(e, basis, nb);
            if (o.norm_out > best_norm + 1e-12) {
                best_norm = o.norm_out;
                best = std::move(e);
            }
        }
        if (best_norm <= 1e-8) throw Error("complete_orthonormal: orthogonal complement is empty");
        scale(1.0 / best_norm, best);
        std::copy(best.begin(), best.end(), q.col(j).begin());
        std::copy(best.begin(), best.end(), basis.col(nb).begin());
        ++nb;
        valid[j] = true;
    }
}

SvdResult dense_svd(const DenseMatrix& a, int max_sweeps) {
    for (double x : a.values())
        if (!std::isfinite(x)) throw InvalidArgument("dense_svd: non-finite entry");
    if (a.rows() < a.cols()) {
        SvdResult t = dense_svd(a.transpose(), max_sweeps);
        std::swap(t.u, t.v);
        return t;
    }
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    DenseMatrix w = a;
    DenseMatrix v = DenseMatrix::identity(n);
    const double tol = kEps * static_cast<double>(std::max<std::size_t>(m, 1));

    bool converged = n <= 1;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                auto wp = w.col(p);
                auto wq = w.col(q);
                const double alpha = dot(wp, wp);
                const double beta = dot(wq, wq);
                const double gamma = dot(wp, wq);
                if (gamma == 0.0 || std::fabs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::fabs(zeta) > 1e150
                                     ? 0.5 / zeta
                                     : std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double x = wp[i];
                    const double y = wq[i];
                    wp[i] = cs * x - sn * y;
                    wq[i] = sn * x + cs * y;
                }
                auto vp = v.col(p);
                auto vq = v.col(q);
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = vp[i];
                    const double y = vq[i];
                    vp[i] = cs * x - sn * y;
                    vq[i] = sn * x + cs * y;
                }
            }
        }
        converged = !rotated;
    }
    if (!converged) throw NonConvergenceError("dense_svd: Jacobi sweep limit exceeded");

    Vector norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = norm2(w.col(j));
    const auto order = stable_order(norms, true);

    SvdResult r{DenseMatrix(m, n), Vector(n), DenseMatrix(n, n)};
    std::vector<bool> valid(n, true);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t src = order[t];
        const double sigma = norms[src];
        r.sigma[t] = sigma;
        std::copy(v.col(src).begin(), v.col(src).end(), r.v.col(t).begin());
        if (sigma <= std::numeric_limits<double>::min()) {
            valid[t] = false;
            continue;
        }
        auto dst = r.u.col(t);
        for (std::size_t i = 0; i < m; ++i) dst[i] = w(i, src) / sigma;
    }
    if (std::find(valid.begin(), valid.end(), false) != valid.end()) complete_orthonormal(r.u, valid);
    return r;
}

EigResult sym_eig(const DenseMatrix& m, int max_sweeps) {
    require_symmetric(m, "sym_eig");
    const std::size_t n = m.rows();
    DenseMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    DenseMatrix v = DenseMatrix::identity(n);

    bool converged = n <= 1;
    for (int sweep = 1; sweep <= max_sweeps && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t q = 1; q < n; ++q)
            for (std::size_t p = 0; p < q; ++p) off += std::fabs(a(p, q));
        if (off == 0.0) {
            converged = true;
            break;
        }
        const double tresh = sweep < 4 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double g = 100.0 * std::fabs(apq);
                const double app = a(p, p);
                const double aqq = a(q, q);
                if (sweep > 4 && std::fabs(app) + g == std::fabs(app) && std::fabs(aqq) + g == std::fabs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                if (std::fabs(apq) <= tresh || apq == 0.0) continue;
                const double h = aqq - app;
                double t;
                if (std::fabs(h) + g == std::fabs(h)) {
                    t = apq / h;
                } else {
                    const double theta = 0.5 * h / apq;
                    t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                auto cp = a.col(p);
                auto cq = a.col(q);
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double x = cp[i];
                    const double y = cq[i];
                    cp[i] = x - s * (y + x * tau);
                    cq[i] = y + s * (x - y * tau);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    a(p, i) = cp[i];
                    a(q, i) = cq[i];
                }
                auto vp = v.col(p);
                auto vq = v.col(q);
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = vp[i];
                    const double y = vq[i];
                    vp[i] = x - s * (y + x * tau);
                    vq[i] = y + s * (x - y * tau);
                }
            }
        }
    }
    if (!converged) throw NonConvergenceError("sym_eig: Jacobi sweep limit exceeded");

    Vector diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    const auto order = stable_order(diag, false);
    EigResult r{Vector(n), DenseMatrix(n, n)};
    for (std::size_t t = 0; t < n; ++t) {
        r.values[t] = diag[order[t]];
        std::copy(v.col(order[t]).begin(), v.col(order[t]).end(), r.vectors.col(t).begin());
    }
    return r;
}

DenseMatrix cholesky(const DenseMatrix& b) {
    require_symmetric(b, "cholesky");
    const std::size_t n = b.rows();
    const double bnorm = matrix_inf_norm(b);
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = b(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 1e-13 * bnorm)) {
            std::ostringstream os;
            os << "matrix is numerically semi-definite: pivot " << j << " is " << d << " (norm " << bnorm << ")";
            throw SemiDefiniteError(os.str());
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = b(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

EigResult symdef_geig(const DenseMatrix& a, const DenseMatrix& b) {
    require_symmetric(a, "symdef_geig");
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("symdef_geig: pencil size mismatch");
    const std::size_t n = a.rows();
    const DenseMatrix l = cholesky(b);

    // C = L^{-1} A L^{-T}, formed as L^{-1} (L^{-1} A)^T.
    DenseMatrix x = a;
    for (std::size_t j = 0; j < n; ++j) forward_solve(l, x.col(j));
    DenseMatrix c = x.transpose();
    for (std::size_t j = 0; j < n; ++j) forward_solve(l, c.col(j));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) {
            const double avg = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = avg;
            c(j, i) = avg;
        }

    EigResult r = sym_eig(c);
    for (std::size_t j = 0; j < n; ++j) backward_solve_t(l, r.vectors.col(j));
    return r;
}

CsDecomposition cs_decompose(const DenseMatrix& j, const DenseMatrix& j_check) {
    const std::size_t k = j_check.cols();
    if (j_check.rows() != k || j.cols() != k || j.rows() != k + 1)
        throw DimensionError("cs_decompose: expected (k+1) x k and k x k inputs");

    CsDecomposition cs;
    cs.x_big = DenseMatrix::identity(k + 1);
    cs.x_hat = DenseMatrix(k, k);
    cs.y = DenseMatrix(k, k);
    cs.c.assign(k, 0.0);
    cs.s.assign(k, 0.0);
    if (k == 0) return cs;

    DenseMatrix gram = matmul_tn(j, j);
    const DenseMatrix gram_c = matmul_tn(j_check, j_check);
    double dev = 0.0;
    for (std::size_t q = 0; q < k; ++q)
        for (std::size_t p = 0; p < k; ++p)
            dev = std::max(dev, std::fabs(gram(p, q) + gram_c(p, q) - (p == q ? 1.0 : 0.0)));
    if (!(dev <= 1e-10 * static_cast<double>(k))) {
        std::ostringstream os;
        os << "cs_decompose: J^T J + Jc^T Jc deviates from I by " << dev;
        throw NotCsPairError(os.str());
    }

    const SvdResult svc = dense_svd(j_check);
    const auto order = stable_order(svc.sigma, false);
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t src = order[t];
        cs.s[t] = svc.sigma[src];
        std::copy(svc.v.col(src).begin(), svc.v.col(src).end(), cs.y.col(t).begin());
        std::copy(svc.u.col(src).begin(), svc.u.col(src).end(), cs.x_hat.col(t).begin());
    }

    // Columns with s < 1/sqrt(2) take x from J y / c; the rest get their
    // c from an SVD of J restricted to those directions.
    std::size_t k1 = 0;
    while (k1 < k && cs.s[k1] < kReorthEta) ++k1;
    for (std::size_t t = 0; t < k1; ++t) {
        Vector w = matvec(j, cs.y.col(t));
        const double c = norm2(w);
        cs.c[t] = c;
        scale(1.0 / c, w);
        std::copy(w.begin(), w.end(), cs.x_big.col(t).begin());
    }
    const std::size_t k2 = k - k1;
    if (k2 > 0) {
        DenseMatrix y2 = cs.y.block(0, k1, k, k2);
        const SvdResult sv2 = dense_svd(matmul(j, y2));
        const DenseMatrix y2r = matmul(y2, sv2.v);
        for (std::size_t t = 0; t < k2; ++t) {
            const std::size_t col = k1 + t;
            std::copy(y2r.col(t).begin(), y2r.col(t).end(), cs.y.col(col).begin());
            cs.c[col] = sv2.sigma[t];
            std::copy(sv2.u.col(t).begin(), sv2.u.col(t).end(), cs.x_big.col(col).begin());
            Vector w = matvec(j_check, cs.y.col(col));
            const double s = norm2(w);
            cs.s[col] = s;
            scale(1.0 / s, w);
            std::copy(w.begin(), w.end(), cs.x_hat.col(col).begin());
        }
    }

    for (std::size_t t = 1; t < k; ++t) {
        orthogonalize(cs.x_big.col(t), cs.x_big, t);
        normalize(cs.x_big.col(t));
        if (t >= k1) {
            orthogonalize(cs.x_hat.col(t), cs.x_hat, t);
            normalize(cs.x_hat.col(t));
        }
    }
    std::vector<bool> valid(k + 1, true);
    valid[k] = false;
    complete_orthonormal(cs.x_big, valid);

    for (std::size_t t = 0; t < k; ++t) {
        if (cs.c[t] < 1e-8 && cs.s[t] < 1e-8) throw Error("cs_decompose: internal inconsistency, c and s both vanish");
        const double r = std::hypot(cs.c[t], cs.s[t]);
        cs.c[t] /= r;
        cs.s[t] /= r;
    }
    return cs;
}

}  // namespace trgsvd
