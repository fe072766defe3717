#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"
#include "trgsvd/error.hpp"
#include "trgsvd/gsvd_solver.hpp"
#include "trgsvd/problems.hpp"

using namespace trgsvd;

namespace {

struct Identities {
    double top = 0.0;     // ||[I 0] V - U J||_max
    double bottom = 0.0;  // ||[0 I] V - Uh Jc||_max
    double cs = 0.0;      // ||J^T J + Jc^T Jc - I||_max
};

Identities measure(const JointBidiagonalization& jb, std::size_t m, std::size_t p) {
    const std::size_t k = jb.order();
    const DenseMatrix j = jb.j();
    const DenseMatrix jc = jb.j_check();
    Identities id;
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < m; ++i) {
            double s = jb.v_tilde()(i, c);
            for (std::size_t l = 0; l <= k; ++l) s -= jb.u()(i, l) * j(l, c);
            id.top = std::max(id.top, std::fabs(s));
        }
        for (std::size_t i = 0; i < p; ++i) {
            double s = jb.v_tilde()(m + i, c);
            for (std::size_t l = 0; l < k; ++l) s -= jb.u_hat()(i, l) * jc(l, c);
            id.bottom = std::max(id.bottom, std::fabs(s));
        }
    }
    const DenseMatrix g1 = oracle::dense_product(oracle::dense_transpose(j), j);
    const DenseMatrix g2 = oracle::dense_product(oracle::dense_transpose(jc), jc);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            id.cs = std::max(id.cs, std::fabs(g1(a, b) + g2(a, b) - (a == b ? 1.0 : 0.0)));
    return id;
}

struct Fixture {
    MatrixPair pair;
    StackedOperator z;
    LeastSquaresSolver ls;
    Fixture(std::size_t m, std::size_t p, std::size_t n, std::uint64_t seed, LsMethod method = LsMethod::dense_qr)
        : pair(gen_random_pair(m, p, n, seed)), z(pair.a, pair.b), ls(z, LsConfig{method}) {}
};

}  // namespace

TEST(JointBidiag, IdentitiesTwoSidedAndOneSided) {
    for (bool one_sided : {false, true}) {
        Fixture f(40, 30, 25, 5);
        JointBidiagonalization jb(f.z, f.ls, 20, one_sided, 9);
        jb.init(oracle::random_vector(40, 3));
        jb.extend(20);
        ASSERT_EQ(jb.order(), 20u);
        const Identities id = measure(jb, 40, 30);
        EXPECT_LE(id.top, 1e-10);
        EXPECT_LE(id.bottom, 1e-10);
        EXPECT_LE(id.cs, 1e-10);
        EXPECT_LE(orthogonality_error(jb.u(), 21), 1e-10);
        if (!one_sided) {
            EXPECT_LE(orthogonality_error(jb.u_hat(), 20), 1e-10);
            EXPECT_LE(orthogonality_error(jb.v_tilde(), 21), 1e-10);
        }
    }
}

TEST(JointBidiag, BidiagonalStructureAndSigns) {
    Fixture f(30, 30, 20, 2);
    JointBidiagonalization jb(f.z, f.ls, 8);
    jb.init(oracle::random_vector(30, 1));
    jb.extend(8);
    const DenseMatrix j = jb.j();
    const DenseMatrix jc = jb.j_check();
    for (std::size_t c = 0; c < 8; ++c) {
        for (std::size_t r = 0; r < 9; ++r) {
            if (r != c && r != c + 1) {
                EXPECT_EQ(j(r, c), 0.0);
            }
        }
        for (std::size_t r = 0; r < 8; ++r) {
            if (r != c && r + 1 != c) {
                EXPECT_EQ(jc(r, c), 0.0);
            }
        }
        EXPECT_GE(j(c, c), 0.0);
        EXPECT_GE(j(c + 1, c), 0.0);
        EXPECT_GE(BidiagonalPair::parity(c) * jc(c, c), 0.0);
    }
    const BidiagonalPair bp = jb.pair();
    EXPECT_EQ(bp.alpha.size(), 9u);
    EXPECT_EQ(bp.alpha_hat.size(), 8u);
    EXPECT_EQ(bp.alpha.back(), jb.alpha_next());
}

TEST(JointBidiag, TruncateKeepsIdentitiesAndValues) {
    for (bool one_sided : {false, true}) {
        Fixture f(40, 30, 25, 6);
        JointBidiagonalization jb(f.z, f.ls, 12, one_sided, 4);
        jb.init(oracle::random_vector(40, 2));
        jb.extend(12);
        const CsDecomposition cs = decompose_pair(jb, Which::largest);
        jb.truncate(cs, 5);
        EXPECT_EQ(jb.order(), 5u);
        EXPECT_EQ(jb.arrow_len(), 5u);
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_NEAR(jb.j()(i, i), cs.c[i], 1e-15);
            EXPECT_NEAR(jb.j_check()(i, i), cs.s[i], 1e-15);
        }
        jb.extend(12);
        const Identities id = measure(jb, 40, 30);
        EXPECT_LE(id.top, 1e-10);
        EXPECT_LE(id.bottom, 1e-10);
        EXPECT_LE(id.cs, 1e-10);
        EXPECT_LE(orthogonality_error(jb.u(), 13), 1e-10);
    }
}

TEST(JointBidiag, RejectsMisuse) {
    Fixture f(10, 10, 5, 1);
    EXPECT_THROW(JointBidiagonalization(f.z, f.ls, 6), InvalidArgument);
    JointBidiagonalization jb(f.z, f.ls, 4);
    EXPECT_THROW(jb.step(), InvalidArgument);
    EXPECT_THROW(jb.init(Vector(3, 1.0)), DimensionError);
    EXPECT_THROW(jb.init(Vector(10, 0.0)), InvalidArgument);
}

TEST(JointBidiag, StartVectorOutsideRangeBreaksDown) {
    // A = [1 0; 0 0; 0 0]: u1 = e_2 has no component in range(A).
    DenseMatrix a(3, 2), b(2, 2);
    a(0, 0) = 1.0;
    b(0, 0) = b(1, 1) = 1.0;
    const StackedOperator z(SparseMatrix::from_dense(a), SparseMatrix::from_dense(b));
    const LeastSquaresSolver ls(z, LsConfig{LsMethod::dense_qr});
    JointBidiagonalization jb(z, ls, 2);
    EXPECT_THROW(jb.init(Vector{0, 1, 0}), BreakdownError);
}

TEST(CsHelpers, RatioAndSort) {
    EXPECT_DOUBLE_EQ(cs_ratio(0.6, 0.8), 0.75);
    EXPECT_TRUE(std::isinf(cs_ratio(1.0, 0.0)));
    CsDecomposition cs;
    cs.c = {0.6, 0.8, 1.0};
    cs.s = {0.8, 0.6, 0.0};
    cs.x_big = DenseMatrix::identity(4);
    cs.x_hat = DenseMatrix::identity(3);
    cs.y = DenseMatrix::identity(3);
    sort_cs(cs, Which::largest);
    EXPECT_EQ(cs.c, (Vector{1.0, 0.8, 0.6}));
    EXPECT_EQ(cs.y(2, 0), 1.0);
    EXPECT_EQ(cs.x_big(3, 3), 1.0);
    sort_cs(cs, Which::smallest, 1);
    EXPECT_EQ(cs.c, (Vector{1.0, 0.6, 0.8}));
}

TEST(CsHelpers, ConvergenceEstimates) {
    CsDecomposition cs;
    cs.c = {1, 1};
    cs.s = {0, 0};
    cs.x_big = DenseMatrix(3, 3);
    cs.x_hat = DenseMatrix(2, 2);
    cs.y = DenseMatrix::identity(2);
    cs.x_big(2, 0) = 1e-10;
    cs.x_hat(1, 0) = 0.0;
    cs.x_big(2, 1) = 0.3;
    cs.x_hat(1, 1) = 0.4;
    const ConvergenceCheck cc = check_convergence(cs, 2.0, 10.0, 1e-8);
    EXPECT_NEAR(cc.estimates[0], 2e-10, 1e-25);
    EXPECT_NEAR(cc.estimates[1], std::hypot(0.6, 4.0), 1e-15);
    EXPECT_EQ(cc.nconv, 1u);
}

TEST(GsvdSolve, DiagonalProblemClosedForm) {
    // The stopping test is absolute on the (c, s) scale: with LSQR the solve
    // accuracy bounds c and s, with QR the ratio is exact to the target.
    const std::size_t n = 300;
    const MatrixPair pr = gen_diagonal_problem(n, 3);
    for (LsMethod method : {LsMethod::dense_qr, LsMethod::lsqr}) {
        GsvdOptions o;
        o.nsv = 4;
        o.ls.method = method;
        for (Which which : {Which::largest, Which::smallest}) {
            o.which = which;
            const GsvdResult r = gsvd_solve(pr.a, pr.b, o);
            ASSERT_EQ(r.values.size(), 4u);
            EXPECT_TRUE(r.all_converged());
            for (std::size_t t = 0; t < 4; ++t) {
                const std::size_t i = which == Which::largest ? t + 1 : n - t;
                const double c = static_cast<double>(n - i + 1) / (2.0 * n);
                const double s = std::sqrt(1.0 - c * c);
                const GsvdQuadruple& q = r.values[t];
                if (method == LsMethod::dense_qr) {
                    EXPECT_LE(oracle::rel_diff(q.sigma, c / s), 1e-8) << to_string(which) << t;
                } else {
                    EXPECT_NEAR(q.c, c, o.tol) << to_string(which) << t;
                    EXPECT_NEAR(q.s, s, o.tol) << to_string(which) << t;
                }
            }
        }
    }
}

TEST(GsvdSolve, MatchesOracleOnRandomPairs) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const MatrixPair pr = gen_random_pair(40, 30, 25, seed);
        const Vector ref = oracle::generalized_singular_values(pr.a.to_dense(), pr.b.to_dense());
        for (Which which : {Which::largest, Which::smallest}) {
            GsvdOptions o;
            o.nsv = 4;
            o.which = which;
            o.ls.method = LsMethod::dense_qr;
            const GsvdResult r = gsvd_solve(pr.a, pr.b, o);
            const double znorm = std::max(inf_norm(pr.a), inf_norm(pr.b));
            for (std::size_t t = 0; t < 4; ++t) {
                const GsvdQuadruple& q = r.values[t];
                const double expect = which == Which::largest ? ref[t] : ref[ref.size() - 1 - t];
                EXPECT_TRUE(q.converged);
                EXPECT_LE(oracle::rel_diff(q.sigma, expect), 1e-8);
                EXPECT_NEAR(q.c * q.c + q.s * q.s, 1.0, 1e-12);
                EXPECT_NEAR(norm2(q.u_a), 1.0, 1e-10);
                EXPECT_NEAR(norm2(q.u_b), 1.0, 1e-10);
                // Directly evaluated residual stays under the a-posteriori bound.
                EXPECT_LE(q.residual, q.residual_estimate * std::sqrt(70.0) * znorm);
                // A g = c u_a and B g = s u_b.
                Vector ag = spmv(pr.a, q.g), bg = spmv(pr.b, q.g);
                axpy(-q.c, q.u_a, ag);
                axpy(-q.s, q.u_b, bg);
                EXPECT_LE(norm2(ag), 1e-7);
                EXPECT_LE(norm2(bg), 1e-7);
            }
        }
    }
}

TEST(GsvdSolve, OneSidedAndLockingAgree) {
    const MatrixPair pr = gen_random_pair(60, 40, 30, 4);
    GsvdOptions o;
    o.nsv = 5;
    o.ncv = 12;
    o.ls.method = LsMethod::dense_qr;
    const GsvdResult base = gsvd_solve(pr.a, pr.b, o);
    EXPECT_GE(base.stats.restarts, 1u);
    o.one_sided = true;
    const GsvdResult one = gsvd_solve(pr.a, pr.b, o);
    o.one_sided = false;
    o.locking = false;
    const GsvdResult nolock = gsvd_solve(pr.a, pr.b, o);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_LE(oracle::rel_diff(one.values[i].sigma, base.values[i].sigma), 1e-7);
        EXPECT_LE(oracle::rel_diff(nolock.values[i].sigma, base.values[i].sigma), 1e-7);
    }
}

TEST(GsvdSolve, ScaledProblemRecoversOriginalValues) {
    const MatrixPair pr = gen_random_pair(50, 60, 35, 8);
    GsvdOptions o;
    o.nsv = 3;
    o.ls.method = LsMethod::dense_qr;
    const GsvdResult base = gsvd_solve(pr.a, pr.b, o);
    for (double gamma : {0.1, 10.0}) {
        o.gamma = gamma;
        const GsvdResult r = gsvd_solve(pr.a, pr.b, o);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_LE(oracle::rel_diff(r.values[i].sigma, base.values[i].sigma), 1e-7) << gamma;
            EXPECT_LE(r.values[i].relative_residual, 1e-7);
            Vector ag = spmv(pr.a, r.values[i].g);
            axpy(-r.values[i].c, r.values[i].u_a, ag);
            EXPECT_LE(norm2(ag), 1e-7) << gamma;
        }
    }
}

TEST(GsvdSolve, Deterministic) {
    const MatrixPair pr = gen_random_pair(40, 30, 25, 3);
    GsvdOptions o;
    o.nsv = 3;
    const GsvdResult r1 = gsvd_solve(pr.a, pr.b, o);
    const GsvdResult r2 = gsvd_solve(pr.a, pr.b, o);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r1.values[i].sigma, r2.values[i].sigma);
    EXPECT_EQ(r1.stats.steps, r2.stats.steps);
}

TEST(GsvdSolve, NotRegularPairRejected) {
    DenseMatrix a(3, 2), b(2, 2);
    a(0, 0) = 1.0;
    b(0, 0) = 1.0;
    GsvdOptions o;
    o.ls.method = LsMethod::dense_qr;
    EXPECT_THROW(gsvd_solve(SparseMatrix::from_dense(a), SparseMatrix::from_dense(b), o), NotRegularError);
}

TEST(GsvdSolve, OptionValidation) {
    GsvdOptions o;
    o.nsv = 0;
    EXPECT_THROW(o.validate(), InvalidArgument);
    o = {};
    o.keep = 1.0;
    EXPECT_THROW(o.validate(), InvalidArgument);
    o = {};
    o.gamma = -1.0;
    EXPECT_THROW(o.validate(), InvalidArgument);
    o = {};
    o.nsv = 5;
    o.ncv = 5;
    EXPECT_THROW(o.validate(), InvalidArgument);
}

TEST(Scaling, RecoverFromScaled) {
    GsvdQuadruple q;
    q.c = 0.6;
    q.s = 0.8;
    q.g = {1.0, 2.0};
    const GsvdQuadruple r = recover_from_scaled(q, 2.0);
    EXPECT_NEAR(r.sigma, 1.5, 1e-15);
    EXPECT_NEAR(r.c, 1.5 / std::sqrt(3.25), 1e-15);
    EXPECT_NEAR(r.s, 1.0 / std::sqrt(3.25), 1e-15);
    const double w = std::sqrt(r.c * r.c + 4.0 * r.s * r.s);
    EXPECT_NEAR(r.g[0], w, 1e-15);
    EXPECT_NEAR(r.g[1], 2.0 * w, 1e-15);

    q.s = 0.0;
    q.c = 1.0;
    const GsvdQuadruple inf = recover_from_scaled(q, 3.0);
    EXPECT_TRUE(inf.infinite);
    EXPECT_TRUE(std::isinf(inf.sigma));
    EXPECT_THROW(recover_from_scaled(q, 0.0), InvalidArgument);
}

TEST(Scaling, GapRatiosMatchDirectComputation) {
    // Scaled cosines c'_i = w_i c_i with w_i^{-2} = c_i^2 + gamma^2 s_i^2.
    auto scaled_sq = [](double c, double gamma) { return c * c / (c * c + gamma * gamma * (1 - c * c)); };
    for (const Vector& c : {Vector{0.9, 0.5, 0.1}, Vector{0.99, 0.95, 0.7, 0.3, 0.05}}) {
        const std::size_t n = c.size();
        const double c1 = c[0], c2 = c[1], cm = c[n - 2], cn = c[n - 1];
        for (double gamma : {0.1, 1.0, 10.0, 100.0}) {
            const double p1 = scaled_sq(c1, gamma), p2 = scaled_sq(c2, gamma);
            const double pm = scaled_sq(cm, gamma), pn = scaled_sq(cn, gamma);
            const double largest = ((p1 - p2) * (c2 * c2 - cn * cn)) / ((p2 - pn) * (c1 * c1 - c2 * c2));
            const double smallest = ((pm - pn) * (c1 * c1 - cm * cm)) / ((p1 - pm) * (cm * cm - cn * cn));
            EXPECT_NEAR(gap_ratio_largest(c1, cn, gamma), largest, 1e-12 * largest);
            EXPECT_NEAR(gap_ratio_smallest(c1, cn, gamma), smallest, 1e-12 * smallest);
        }
    }
    EXPECT_EQ(gap_ratio_largest(0.9, 0.1, 1.0), 1.0);
    const double limit = (1 - 0.01) / (1 - 0.81);
    EXPECT_NEAR(gap_ratio_largest(0.9, 0.1, 1e6), limit, 1e-4 * limit);
}
