#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "trgsvd/orthogonalization.hpp"

using namespace trgsvd;

namespace {

DenseMatrix random_basis(std::size_t n, std::size_t k, std::uint64_t seed) {
    return oracle::mgs_orthonormal(oracle::random_dense(n, k, seed));
}

double max_projection(const DenseMatrix& q, std::size_t k, const Vector& v) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double d = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) d += q(i, j) * v[i];
        worst = std::max(worst, std::fabs(d));
    }
    return worst;
}

}  // namespace

TEST(Orthogonalize, EmptyBasis) {
    Vector v{3, 4};
    const OrthoResult r = orthogonalize(v, DenseMatrix(2, 0), 0);
    EXPECT_EQ(v, (Vector{3, 4}));
    EXPECT_TRUE(r.coeffs.empty());
    EXPECT_FALSE(r.breakdown);
}

TEST(Orthogonalize, AxisProjection) {
    DenseMatrix e1(3, 1);
    e1(0, 0) = 1.0;
    Vector v{1, 1, 0};
    const OrthoResult r = orthogonalize(v, e1, 1);
    EXPECT_EQ(v, (Vector{0, 1, 0}));
    ASSERT_EQ(r.coeffs.size(), 1u);
    EXPECT_EQ(r.coeffs[0], 1.0);
}

TEST(Orthogonalize, RandomBasisAndProperties) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DenseMatrix q = random_basis(50, 8, seed);
        const Vector v0 = oracle::random_vector(50, seed + 1000);
        Vector v = v0;
        OrthoCounter cnt;
        const OrthoResult r = orthogonalize(v, q, 8, &cnt);
        EXPECT_LT(max_projection(q, 8, v), 1e-12 * norm2(v));
        EXPECT_LE(norm2(v), norm2(v0) * (1 + 1e-15));
        // v0 = v + Q coeffs
        Vector rec = v;
        for (std::size_t j = 0; j < 8; ++j) axpy(r.coeffs[j], q.col(j), rec);
        double err = 0.0;
        for (std::size_t i = 0; i < 50; ++i) err = std::max(err, std::fabs(rec[i] - v0[i]));
        EXPECT_LE(err, 1e-13 * norm2(v0));
        // idempotence
        Vector w = v;
        orthogonalize(w, q, 8);
        for (std::size_t i = 0; i < 50; ++i) EXPECT_LE(std::fabs(w[i] - v[i]), 1e-14 * norm2(v));
        EXPECT_GE(cnt.inner_products, 8u);
    }
}

TEST(Orthogonalize, SecondPassOnNearlyDependentVector) {
    const DenseMatrix q = random_basis(30, 5, 7);
    Vector v(30, 0.0);
    for (std::size_t j = 0; j < 5; ++j) axpy(1.0, q.col(j), v);
    const Vector tiny = oracle::random_vector(30, 8);
    axpy(1e-6, tiny, v);
    OrthoCounter cnt;
    const OrthoResult r = orthogonalize(v, q, 5, &cnt);
    EXPECT_EQ(r.passes, 2);
    EXPECT_EQ(cnt.second_passes, 1u);
    EXPECT_LT(max_projection(q, 5, v), 1e-12 * norm2(v));
    EXPECT_FALSE(r.breakdown);
}

TEST(Orthogonalize, BreakdownInSpan) {
    const DenseMatrix q = random_basis(20, 4, 9);
    Vector v(20, 0.0);
    axpy(2.0, q.col(1), v);
    axpy(-1.0, q.col(3), v);
    const OrthoResult r = orthogonalize(v, q, 4);
    EXPECT_TRUE(r.breakdown);
}

TEST(Normalize, Cases) {
    Vector v{3, 4};
    const NormalizeResult r = normalize(v);
    EXPECT_EQ(r.norm, 5.0);
    EXPECT_DOUBLE_EQ(v[0], 0.6);
    EXPECT_DOUBLE_EQ(v[1], 0.8);
    Vector e(10, 0.0);
    e[6] = 1.0;
    normalize(e);
    EXPECT_EQ(e[6], 1.0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Vector w = oracle::random_vector(17, seed);
        normalize(w);
        EXPECT_NEAR(oracle::vnorm(w), 1.0, 1e-15);
    }
    Vector z(4, 0.0);
    EXPECT_TRUE(normalize(z).breakdown);
}

TEST(RandomOrthogonalVector, OrthogonalUnitOrEmpty) {
    const DenseMatrix q = random_basis(12, 6, 3);
    SplitMix64 rng(4);
    auto v = random_orthogonal_vector(12, q, 6, rng);
    ASSERT_TRUE(v.has_value());
    EXPECT_NEAR(norm2(*v), 1.0, 1e-15);
    EXPECT_LT(max_projection(q, 6, *v), 1e-14);
    const DenseMatrix full = random_basis(5, 5, 6);
    EXPECT_FALSE(random_orthogonal_vector(5, full, 5, rng).has_value());
}
