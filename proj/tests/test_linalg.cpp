#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "ncfree/domains.hpp"
#include "ncfree/json_io.hpp"
#include "ncfree/linalg.hpp"
#include "ncfree/random.hpp"

using namespace ncfree;

TEST(Spectrum, Examples) {
  const Spectrum id = spectrum(CMatrix::Identity(3, 3));
  ASSERT_EQ(id.size(), 3u);
  for (cd z : id.eigenvalues) EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-14);

  CMatrix nil(2, 2);
  nil << 0, 1, 0, 0;
  for (cd z : spectrum(nil).eigenvalues) EXPECT_NEAR(std::abs(z), 0.0, 1e-14);

  const Spectrum d = spectrum(diagonal({4, 2}));
  EXPECT_NEAR(d.eigenvalues[0].real(), 2.0, 1e-14);
  EXPECT_NEAR(d.eigenvalues[1].real(), 4.0, 1e-14);
}

TEST(Spectrum, DirectSumIsTheUnion) {
  std::mt19937_64 rng(1);
  const CMatrix x = random_gaussian_matrix(3, rng), y = random_gaussian_matrix(2, rng);
  std::vector<cd> expected = spectrum(x).eigenvalues;
  const auto ys = spectrum(y).eigenvalues;
  expected.insert(expected.end(), ys.begin(), ys.end());
  std::sort(expected.begin(), expected.end(), complex_lex_less);
  const auto got = spectrum(direct_sum(x, y)).eigenvalues;
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_LT(std::abs(got[i] - expected[i]), 1e-10);
}

TEST(Spectrum, ClusteringGroupsCloseEigenvalues) {
  Spectrum s;
  s.eigenvalues = {1.0, 1.0 + 1e-9, 5.0};
  const auto c = s.cluster(1e-6);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].members.size(), 2u);
  EXPECT_NEAR(c[1].center.real(), 5.0, 1e-15);
}

TEST(DirectSum, ScalarExample) {
  const CMatrix d = direct_sum(direct_sum(scalar_matrix(3, 1), scalar_matrix(2, 1)), scalar_matrix(1, 1));
  EXPECT_EQ(d, diagonal({3, 2, 1}));
}

TEST(Conjugate, IdentityAndSpectrum) {
  std::mt19937_64 rng(2);
  const MatrixTuple x({random_gaussian_matrix(3, rng), random_gaussian_matrix(3, rng)});
  const MatrixTuple same = conjugate(CMatrix::Identity(3, 3), x);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_LT((same[j] - x[j]).norm(), 1e-14);

  const CMatrix s = random_invertible(3, rng, 20.0);
  const auto a = spectrum(x[0]).eigenvalues;
  const auto b = spectrum(conjugate(s, x[0])).eigenvalues;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-8);
  EXPECT_THROW(conjugate(CMatrix::Zero(3, 3), x), PreconditionError);
}

TEST(OpNorm, Examples) {
  EXPECT_NEAR(op_norm(CMatrix::Identity(4, 4)), 1.0, 1e-15);
  EXPECT_EQ(op_norm(CMatrix::Zero(3, 3)), 0.0);
  CMatrix r(2, 2);
  r << 0, 2.5, 0, 0;
  EXPECT_NEAR(op_norm(r), 2.5, 1e-15);
}

TEST(OpNorm, SubmultiplicativeAndUnitarilyInvariant) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = random_gaussian_matrix(4, rng), b = random_gaussian_matrix(4, rng);
    EXPECT_LE(op_norm(a * b), op_norm(a) * op_norm(b) * (1.0 + 1e-10));
    const Eigen::HouseholderQR<CMatrix> qr(random_gaussian_matrix(4, rng));
    const CMatrix q = qr.householderQ();
    EXPECT_NEAR(op_norm(q * a * q.adjoint()), op_norm(a), 1e-10 * op_norm(a));
  }
}

TEST(InQ, Examples) {
  EXPECT_TRUE(in_Q(diagonal({1, 2})));
  EXPECT_FALSE(in_Q(diagonal({1, -1})));
  EXPECT_FALSE(in_Q(diagonal({0, 3})));
}

TEST(InI, Examples) {
  EXPECT_TRUE(in_I(CMatrix::Identity(3, 3)));
  EXPECT_FALSE(in_I(CMatrix::Zero(3, 3)));
  EXPECT_FALSE(in_I(diagonal({1, 1e-14}), 1e-10));
}

TEST(InQ, ImpliesInvertible) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const CMatrix x = random_gaussian_matrix(3, rng);
    if (in_Q(x)) EXPECT_TRUE(in_I(x));
  }
}

TEST(NumericalRank, CountsLargeSingularValues) {
  EXPECT_EQ(numerical_rank(diagonal({1, 1e-3, 1e-13})), 2);
  EXPECT_EQ(numerical_rank(CMatrix::Zero(2, 2)), 0);
  EXPECT_THROW(checked_inverse(diagonal({1, 0})), PreconditionError);
}

TEST(RandomTuple, Constraints) {
  std::mt19937_64 rng(5);
  TupleConstraints q;
  q.v_in_Q = true;
  for (int t = 0; t < 10; ++t) EXPECT_TRUE(in_Q(v_part(random_tuple(3, 2, q, rng))));

  TupleConstraints simple;
  simple.distinct_eigenvalues = true;
  simple.unit_norm = true;
  for (int t = 0; t < 10; ++t) {
    const MatrixTuple w = random_tuple(3, 2, simple, rng);
    EXPECT_LE(op_norm(w), 1.0 + 1e-12);
    const auto c = spectrum(v_part(w)).cluster(1e-8);
    EXPECT_EQ(c.size(), 3u);
  }

  TupleConstraints generic;
  generic.generic_u = true;
  const MatrixTuple w = random_tuple(3, 2, generic, rng);
  EXPECT_EQ(fiber(w).size(), 2u);

  EXPECT_THROW(random_tuple(0, 2, q, rng), DimensionError);
  EXPECT_THROW(random_tuple(2, 1, generic, rng), PreconditionError);
}

TEST(RandomTuple, SeededStreamsAreReproducible) {
  std::mt19937_64 a(42), b(42);
  const MatrixTuple x = random_tuple(3, 2, {}, a);
  const MatrixTuple y = random_tuple(3, 2, {}, b);
  EXPECT_EQ(x[0], y[0]);
  EXPECT_EQ(x[1], y[1]);
}

TEST(AlgResidual, PowersAreInTheAlgebra) {
  std::mt19937_64 rng(6);
  const CMatrix x = random_gaussian_matrix(4, rng);
  EXPECT_LE(alg_residual(x, x * x * x + 2.0 * x), 1e-10);
  EXPECT_GT(alg_residual(x, random_gaussian_matrix(4, rng)), 1e-3);
}

TEST(TupleJson, BitExactRoundTrip) {
  std::mt19937_64 rng(7);
  std::vector<CMatrix> parts{random_gaussian_matrix(3, rng), random_gaussian_matrix(3, rng)};
  parts[0](0, 0) = cd{std::numeric_limits<double>::denorm_min(), -0.0};
  parts[1](2, 1) = cd{1e308, 1.0 / 3.0};
  const MatrixTuple x(parts);
  const std::string text = tuple_to_json(x).dump();
  const MatrixTuple back = tuple_from_json(parse_json_text(text));
  ASSERT_EQ(back.d(), 2u);
  for (std::size_t j = 0; j < 2; ++j)
    for (Eigen::Index r = 0; r < 3; ++r)
      for (Eigen::Index c = 0; c < 3; ++c) {
        EXPECT_EQ(back[j](r, c).real(), x[j](r, c).real());
        EXPECT_EQ(back[j](r, c).imag(), x[j](r, c).imag());
      }
  EXPECT_EQ(tuple_to_json(back).dump(), text);
}

TEST(TupleJson, Errors) {
  EXPECT_THROW(tuple_from_json(parse_json_text(R"({"n": 2, "d": 1})")), ParseError);
  EXPECT_THROW(tuple_from_json(parse_json_text(R"({"n": 2, "d": 1, "entries": [[[[1,0]]]]})")), DimensionError);
  EXPECT_THROW(parse_json_text("{not json"), ParseError);
}
