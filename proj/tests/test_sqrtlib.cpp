#include <random>

#include <gtest/gtest.h>

#include "ncfree/random.hpp"
#include "ncfree/sqrtlib.hpp"
#include "oracles.hpp"

using namespace ncfree;

namespace {

CMatrix nilpotent2() {
  CMatrix m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}

}  // namespace

TEST(SqrtExists, Examples) {
  EXPECT_FALSE(sqrt_exists(nilpotent2()));
  EXPECT_TRUE(sqrt_exists(CMatrix::Zero(3, 3)));
  std::mt19937_64 rng(1);
  EXPECT_TRUE(sqrt_exists(random_invertible(4, rng)));
  EXPECT_TRUE(sqrt_exists(diagonal({0, 0, 2})));
}

TEST(SqrtExists, AgreesWithTheJordanFormOracle) {
  std::mt19937_64 rng(2);
  const auto forms = oracle::jordan_forms(4);
  ASSERT_GT(forms.size(), 20u);
  for (const auto& blocks : forms) {
    const CMatrix j = oracle::jordan_matrix(blocks);
    const bool expected = oracle::jordan_sqrt_exists(blocks);
    EXPECT_EQ(sqrt_exists(j), expected);
    // similarity does not change the answer
    const CMatrix s = random_invertible(j.rows(), rng, 5.0);
    EXPECT_EQ(sqrt_exists(s.inverse() * j * s, 1e-8), expected);
  }
}

TEST(AllSquareRoots, IdentityHasTwoRoots) {
  const RootSet rs = all_square_roots(CMatrix::Identity(2, 2));
  EXPECT_EQ(rs.k, 1);
  EXPECT_FALSE(rs.extended);
  EXPECT_TRUE(oracle::same_set(rs.roots, {CMatrix::Identity(2, 2), -CMatrix::Identity(2, 2)}, 1e-12));
}

TEST(AllSquareRoots, DiagonalHasFourRoots) {
  const RootSet rs = all_square_roots(diagonal({1, 4}));
  EXPECT_EQ(rs.k, 2);
  const std::vector<CMatrix> expected{diagonal({1, 2}), diagonal({-1, 2}), diagonal({1, -2}), diagonal({-1, -2})};
  EXPECT_TRUE(oracle::same_set(rs.roots, expected, 1e-12));
}

TEST(AllSquareRoots, JordanBlockAtOne) {
  // y = a I + b N with N = x - I: y^2 = a^2 I + 2ab N, so a = +-1, b = a/2.
  CMatrix x(2, 2);
  x << 1, 1, 0, 1;
  const RootSet rs = all_square_roots(x);
  ASSERT_EQ(rs.roots.size(), 2u);
  CMatrix plus(2, 2);
  plus << 1, 0.5, 0, 1;
  EXPECT_TRUE(oracle::same_set(rs.roots, {plus, -plus}, 1e-12));
  for (const auto& y : rs.roots) EXPECT_NEAR(std::abs(std::abs(y.trace()) - 2.0), 0.0, 1e-12);
}

TEST(AllSquareRoots, MatchesTheEigenOracle) {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 6; ++n) {
    const auto lambda = random_separated_values(static_cast<std::size_t>(n), rng, 0.5, 2.0, 0.3);
    Eigen::VectorXcd l(n);
    for (int i = 0; i < n; ++i) l(i) = lambda[static_cast<std::size_t>(i)];
    const CMatrix p = random_invertible(n, rng, 10.0);
    const CMatrix x = p * l.asDiagonal() * p.inverse();
    const RootSet rs = all_square_roots(x);
    EXPECT_EQ(rs.roots.size(), 1u << n);
    EXPECT_TRUE(oracle::same_set(rs.roots, oracle::eigen_roots(x), 1e-7 * (1.0 + op_norm(x))));
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
      EXPECT_LE(rs.residuals[i], 1e-8);
      EXPECT_LE(rs.alg_residuals[i], 1e-7);
      EXPECT_LE(commutator_norm(rs.roots[i], x), 1e-8 * op_norm(x));
    }
  }
}

TEST(AllSquareRoots, ClusteredSpectrumCountsClusters) {
  // eigenvalues {1, 1 + 1e-9, 4} form two clusters, hence 4 roots
  std::mt19937_64 rng(4);
  const CMatrix p = random_invertible(3, rng, 5.0);
  const CMatrix x = p * diagonal({1.0, 1.0 + 1e-9, 4.0}) * p.inverse();
  const RootSet rs = all_square_roots(x);
  EXPECT_EQ(rs.k, 2);
  EXPECT_EQ(rs.roots.size(), 4u);
  for (double r : rs.residuals) EXPECT_LE(r, 1e-7);
}

TEST(AllSquareRoots, Errors) {
  EXPECT_THROW(all_square_roots(nilpotent2()), PreconditionError);
  EXPECT_THROW(all_square_roots(CMatrix(2, 3)), DimensionError);
  // with a coarse gap the chain 1, 1.009, 1.018 is one cluster, wider than
  // the radius that keeps it apart from 1.06
  EXPECT_THROW(all_square_roots(diagonal({1.0, 1.009, 1.018, 1.06}), {0.01}), ClusteringError);
}

TEST(AllSquareRoots, SingularSemisimpleExtension) {
  const RootSet rs = all_square_roots(diagonal({0, 1, 4}));
  EXPECT_TRUE(rs.extended);
  EXPECT_EQ(rs.k, 2);
  const std::vector<CMatrix> expected{diagonal({0, 1, 2}), diagonal({0, -1, 2}), diagonal({0, 1, -2}),
                                      diagonal({0, -1, -2})};
  EXPECT_TRUE(oracle::same_set(rs.roots, expected, 1e-10));

  const RootSet zero = all_square_roots(CMatrix::Zero(2, 2));
  ASSERT_EQ(zero.roots.size(), 1u);
  EXPECT_EQ(zero.roots[0], CMatrix::Zero(2, 2));
}

TEST(AllSquareRoots, DefectiveNonzeroNextToZeroIsUnsupported) {
  CMatrix x = CMatrix::Zero(3, 3);
  x(1, 1) = 1.0;
  x(1, 2) = 1.0;
  x(2, 2) = 1.0;
  EXPECT_THROW(all_square_roots(x), Unsupported);
}

TEST(RiemannFiber, Counts) {
  EXPECT_EQ(riemann_fiber(CMatrix::Identity(2, 2)).size(), 2u);
  const auto f = riemann_fiber(diagonal({1, 4, 9}));
  EXPECT_EQ(f.size(), 8u);
  for (const auto& [m, n] : f) EXPECT_LE(relative_residual(n * n, m), 1e-12);
  EXPECT_THROW(riemann_fiber(diagonal({0, 1})), PreconditionError);
}

TEST(RiemannFiber, CloseEigenvaluesFormOneCluster) {
  const CMatrix m = diagonal({2.0, 2.0 + 1e-8});
  const auto f = riemann_fiber(m);
  ASSERT_EQ(f.size(), 2u);
  for (const auto& [a, n] : f) EXPECT_LE(relative_residual(n * n, a), 1e-7);
}

TEST(SigmaMap, Examples) {
  const auto [sq, y] = sigma_map(CMatrix::Identity(2, 2));
  EXPECT_EQ(sq, CMatrix::Identity(2, 2));
  EXPECT_EQ(y, CMatrix::Identity(2, 2));
  const auto p = sigma_map(diagonal({1, 2}));
  EXPECT_EQ(p.first, diagonal({1, 4}));
  EXPECT_EQ(sigma_inverse(p), diagonal({1, 2}));
}
