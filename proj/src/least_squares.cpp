#include "trgsvd/least_squares.hpp"

#include <cmath>
#include <sstream>

#include "trgsvd/error.hpp"

namespace trgsvd {

void LsConfig::validate() const {
    if (!(lsqr_tol > 0.0)) throw InvalidArgument("lsqr_tol must be positive");
}

HouseholderQR::HouseholderQR(DenseMatrix a) : qr_(std::move(a)), tau_(qr_.cols(), 0.0) {
    const std::size_t m = qr_.rows();
    const std::size_t n = qr_.cols();
    if (n > m) throw DimensionError("HouseholderQR: matrix must have at least as many rows as columns");
    for (std::size_t j = 0; j < n; ++j) {
        auto col = qr_.col(j);
        const double alpha = col[j];
        const double xnorm = norm2(col.subspan(j + 1));
        if (xnorm == 0.0) {
            tau_[j] = 0.0;
            continue;
        }
        const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
        tau_[j] = (beta - alpha) / beta;
        const double f = 1.0 / (alpha - beta);
        for (std::size_t i = j + 1; i < m; ++i) col[i] *= f;
        col[j] = beta;
        // Apply H = I - tau v v^T (v_0 = 1) to the trailing columns.
        for (std::size_t c = j + 1; c < n; ++c) {
            auto t = qr_.col(c);
            double w = t[j];
            for (std::size_t i = j + 1; i < m; ++i) w += col[i] * t[i];
            w *= tau_[j];
            t[j] -= w;
            for (std::size_t i = j + 1; i < m; ++i) t[i] -= w * col[i];
        }
    }
}

void HouseholderQR::apply_qt(std::span<double> b) const {
    if (b.size() != rows()) throw DimensionError("HouseholderQR: right-hand side length mismatch");
    for (std::size_t j = 0; j < cols(); ++j) {
        if (tau_[j] == 0.0) continue;
        auto v = qr_.col(j);
        double w = b[j];
        for (std::size_t i = j + 1; i < rows(); ++i) w += v[i] * b[i];
        w *= tau_[j];
        b[j] -= w;
        for (std::size_t i = j + 1; i < rows(); ++i) b[i] -= w * v[i];
    }
}

Vector HouseholderQR::solve(std::span<const double> b, double rank_tol) const {
    Vector qtb(b.begin(), b.end());
    apply_qt(qtb);
    const std::size_t n = cols();
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        const double d = qr_(ii, ii);
        if (std::fabs(d) < rank_tol) {
            std::ostringstream os;
            os << "stacked matrix is numerically rank deficient: |R(" << ii << "," << ii << ")| = " << std::fabs(d);
            throw NotRegularError(os.str());
        }
        double s = qtb[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= qr_(ii, j) * x[j];
        x[ii] = s / d;
    }
    return x;
}

LeastSquaresSolver::LeastSquaresSolver(const StackedOperator& z, LsConfig cfg) : z_(z), cfg_(cfg) {
    cfg_.validate();
    if (cfg_.lsqr_maxit == 0) cfg_.lsqr_maxit = 10 * z_.rows();
    rank_tol_ = 1e-12 * z_.norm_inf();
    if (cfg_.method == LsMethod::dense_qr) {
        if (z_.rows() > cfg_.dense_limit) {
            std::ostringstream os;
            os << "dense QR requested for " << z_.rows() << " stacked rows, above dense_limit " << cfg_.dense_limit;
            throw InvalidArgument(os.str());
        }
        if (z_.rows() < z_.n()) throw NotRegularError("stacked matrix has fewer rows than columns");
        qr_ = std::make_unique<HouseholderQR>(z_.to_dense());
        for (std::size_t i = 0; i < z_.n(); ++i) {
            if (std::fabs(qr_->r_diag(i)) < rank_tol_) {
                std::ostringstream os;
                os << "stacked matrix is numerically rank deficient at column " << i;
                throw NotRegularError(os.str());
            }
        }
    }
}

LsResult LeastSquaresSolver::solve(std::span<const double> b) const {
    if (b.size() != z_.rows()) throw DimensionError("solve_ls: right-hand side length mismatch");
    if (!qr_) return lsqr(b);
    LsResult r;
    r.x = qr_->solve(b, rank_tol_);
    Vector res = z_.apply(r.x);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= b[i];
    r.residual_norm = norm2(res);
    r.normal_residual = norm2(z_.adjoint(res));
    return r;
}

LsResult LeastSquaresSolver::lsqr(std::span<const double> b) const {
    if (b.size() != z_.rows()) throw DimensionError("lsqr: right-hand side length mismatch");
    const std::size_t n = z_.n();
    const double tol = cfg_.lsqr_tol;
    LsResult r;
    r.x.assign(n, 0.0);

    Vector u(b.begin(), b.end());
    double beta = norm2(u);
    const double bnorm = beta;
    if (beta == 0.0) return r;
    scale(1.0 / beta, u);
    Vector v = z_.adjoint(u);
    double alpha = norm2(v);
    if (alpha == 0.0) {
        r.residual_norm = bnorm;
        return r;
    }
    scale(1.0 / alpha, v);
    Vector w = v;
    double phibar = beta;
    double rhobar = alpha;
    double anorm2 = 0.0;

    r.residual_norm = bnorm;
    r.normal_residual = alpha * beta;

    for (std::size_t it = 1; it <= cfg_.lsqr_maxit; ++it) {
        Vector zv = z_.apply(v);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = zv[i] - alpha * u[i];
        beta = norm2(u);
        anorm2 += alpha * alpha + beta * beta;
        if (beta > 0.0) scale(1.0 / beta, u);

        Vector ztu = z_.adjoint(u);
        for (std::size_t i = 0; i < n; ++i) v[i] = ztu[i] - beta * v[i];
        alpha = norm2(v);
        if (alpha > 0.0) scale(1.0 / alpha, v);

        const double rho = std::hypot(rhobar, beta);
        const double c = rhobar / rho;
        const double s = beta / rho;
        const double theta = s * alpha;
        rhobar = -c * alpha;
        const double phi = c * phibar;
        phibar = s * phibar;

        axpy(phi / rho, w, r.x);
        for (std::size_t i = 0; i < n; ++i) w[i] = v[i] - (theta / rho) * w[i];

        r.iterations = it;
        r.residual_norm = phibar;
        r.normal_residual = phibar * alpha * std::fabs(c);
        const double anorm = std::sqrt(anorm2);
        const double xnorm = norm2(r.x);

        // Compatible system, then least-squares optimality.
        if (r.residual_norm <= tol * bnorm + tol * anorm * xnorm) return r;
        if (r.normal_residual <= tol * anorm * r.residual_norm) return r;
    }
    std::ostringstream os;
    os << "LSQR did not converge in " << cfg_.lsqr_maxit << " iterations (normal residual "
       << r.normal_residual << ")";
    throw NonConvergenceError(os.str(), r.x);
}

Vector LeastSquaresSolver::expand(std::span<const double> u, std::size_t* iterations) const {
    if (u.size() != z_.m()) throw DimensionError("expand: vector length must equal rows of A");
    Vector rhs(z_.rows(), 0.0);
    std::copy(u.begin(), u.end(), rhs.begin());
    return project(rhs, iterations);
}

Vector LeastSquaresSolver::project(std::span<const double> b, std::size_t* iterations) const {
    const LsResult r = solve(b);
    if (iterations) *iterations += r.iterations;
    return z_.apply(r.x);
}

LsResult solve_ls(const StackedOperator& z, std::span<const double> b, const LsConfig& cfg) {
    return LeastSquaresSolver(z, cfg).solve(b);
}

Vector expand(const StackedOperator& z, std::span<const double> u, const LsConfig& cfg) {
    return LeastSquaresSolver(z, cfg).expand(u);
}

}  // namespace trgsvd
