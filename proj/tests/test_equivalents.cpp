#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "trgsvd/equivalents.hpp"
#include "trgsvd/error.hpp"
#include "trgsvd/problems.hpp"

using namespace trgsvd;

namespace {

SparseMatrix scalar(double x) { return SparseMatrix::diagonal(Vector{x}); }

}  // namespace

TEST(GsvdCross, DiagonalPencil) {
    const auto r = gsvd_cross(SparseMatrix::diagonal(Vector{2, 1}), SparseMatrix::identity(2), 2, Which::largest);
    EXPECT_NEAR(r[0].sigma, 2.0, 1e-14);
    EXPECT_NEAR(r[1].sigma, 1.0, 1e-14);
    EXPECT_NEAR(r[0].c, 2.0 / std::sqrt(5.0), 1e-14);
}

TEST(GsvdCross, SmallestViaReversedPencilMatchesDirect) {
    const MatrixPair pr = gen_random_pair(30, 25, 20, 3);
    const auto reversed = gsvd_cross(pr.a, pr.b, 4, Which::smallest);
    // Direct path: smallest of the forward pencil, read off the full largest list.
    const auto all = gsvd_cross(pr.a, pr.b, 20, Which::largest);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(oracle::rel_diff(reversed[i].sigma, all[19 - i].sigma), 1e-10);
}

TEST(GsvdCross, DefinitionAndResidual) {
    const MatrixPair pr = gen_random_pair(30, 25, 20, 4);
    const double znorm = std::max(inf_norm(pr.a), inf_norm(pr.b));
    const Vector ref = oracle::generalized_singular_values(pr.a.to_dense(), pr.b.to_dense());
    for (Which which : {Which::largest, Which::smallest}) {
        const auto r = gsvd_cross(pr.a, pr.b, 5, which);
        for (std::size_t i = 0; i < 5; ++i) {
            const GsvdQuadruple& q = r[i];
            const double expect = which == Which::largest ? ref[i] : ref[19 - i];
            EXPECT_LE(oracle::rel_diff(q.sigma, expect), 1e-9);
            Vector ag = spmv(pr.a, q.g), bg = spmv(pr.b, q.g);
            axpy(-q.c, q.u_a, ag);
            axpy(-q.s, q.u_b, bg);
            EXPECT_LE(norm2(ag), 1e-10);
            EXPECT_LE(norm2(bg), 1e-10);
            EXPECT_NEAR(q.c * q.c + q.s * q.s, 1.0, 1e-14);
            // s^2 A^T A g - c^2 B^T B g
            Vector cr = spmv_transpose(pr.a, spmv(pr.a, q.g));
            scale(q.s * q.s, cr);
            axpy(-q.c * q.c, spmv_transpose(pr.b, spmv(pr.b, q.g)), cr);
            EXPECT_LE(norm2(cr), 1e-9 * znorm * znorm);
        }
    }
}

TEST(GsvdCross, SemiDefiniteRejected) {
    DenseMatrix b(2, 2);
    b(0, 0) = 1.0;
    EXPECT_THROW(gsvd_cross(SparseMatrix::identity(2), SparseMatrix::from_dense(b), 1, Which::largest),
                 SemiDefiniteError);
}

TEST(GsvdCyclic, ScalarPencils) {
    const auto a_side = gsvd_cyclic(scalar(2.0), scalar(1.0), 1, Which::largest, CyclicVariant::a_side);
    EXPECT_NEAR(a_side[0].sigma, 2.0, 1e-14);
    const auto b_side = gsvd_cyclic(scalar(2.0), scalar(1.0), 1, Which::largest, CyclicVariant::b_side);
    EXPECT_NEAR(b_side[0].sigma, 2.0, 1e-14);
    EXPECT_NEAR(b_side[0].c, 2.0 / std::sqrt(5.0), 1e-14);
}

TEST(GsvdCyclic, SidesAreReciprocalAndAgreeWithCross) {
    const MatrixPair pr = gen_random_pair(40, 30, 25, 6);
    for (Which which : {Which::largest, Which::smallest}) {
        const auto as = gsvd_cyclic(pr.a, pr.b, 5, which, CyclicVariant::a_side);
        const auto bs = gsvd_cyclic(pr.a, pr.b, 5, which, CyclicVariant::b_side);
        const auto cr = gsvd_cross(pr.a, pr.b, 5, which);
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_LE(oracle::rel_diff(1.0 / as[i].sigma, 1.0 / bs[i].sigma), 1e-10);
            EXPECT_LE(oracle::rel_diff(as[i].sigma, cr[i].sigma), 1e-8);
            Vector ag = spmv(pr.a, as[i].g);
            axpy(-as[i].c, as[i].u_a, ag);
            EXPECT_LE(norm2(ag), 1e-10);
        }
    }
}

TEST(GsvdCyclic, ReversedPairGivesReciprocals) {
    const MatrixPair pr = gen_random_pair(30, 30, 20, 7);
    const auto fwd = gsvd_cross(pr.a, pr.b, 3, Which::largest);
    const auto rev = gsvd_cross(pr.b, pr.a, 3, Which::smallest);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(oracle::rel_diff(1.0 / rev[i].sigma, fwd[i].sigma), 1e-10);
}

TEST(Equivalents, ZeroValueLeavesVectorEmpty) {
    DenseMatrix a(2, 2);
    a(0, 0) = 1.0;
    const auto r = gsvd_cross(SparseMatrix::from_dense(a), SparseMatrix::identity(2), 2, Which::largest);
    EXPECT_NEAR(r[1].sigma, 0.0, 1e-14);
    EXPECT_TRUE(r[1].u_a.empty());
    EXPECT_FALSE(r[1].u_b.empty());
}

TEST(Equivalents, RejectsBadRequests) {
    EXPECT_THROW(gsvd_cross(SparseMatrix::identity(2), SparseMatrix::identity(3), 1, Which::largest), DimensionError);
    EXPECT_THROW(gsvd_cross(SparseMatrix::identity(2), SparseMatrix::identity(2), 3, Which::largest), InvalidArgument);
}
