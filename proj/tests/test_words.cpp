#include <random>

#include <gtest/gtest.h>

#include "ncfree/random.hpp"
#include "ncfree/words.hpp"
#include "oracles.hpp"

using namespace ncfree;

namespace {

FreePoly X() { return FreePoly::letter(2, 1, Chart::xy); }
FreePoly Y() { return FreePoly::letter(2, 2, Chart::xy); }
FreePoly U() { return FreePoly::letter(2, 1, Chart::uv); }
FreePoly V() { return FreePoly::letter(2, 2, Chart::uv); }

FreePoly random_poly(std::mt19937_64& rng, int max_degree, int terms) {
  std::uniform_int_distribution<int> deg(0, max_degree), letter(1, 2), coef(-4, 4);
  FreePoly p(2, Chart::xy);
  for (int t = 0; t < terms; ++t) {
    Word w(static_cast<std::size_t>(deg(rng)));
    for (auto& l : w) l = letter(rng);
    p.add_term(w, static_cast<double>(coef(rng)));
  }
  return p;
}

}  // namespace

TEST(FreePoly, CanonicalFormDropsZeros) {
  FreePoly p = X() * Y() - X() * Y();
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.size(), 0u);
  EXPECT_EQ(p.degree(), -1);

  FreePoly q(2, Chart::xy);
  q.add_term({1, 2}, 0.0);
  EXPECT_TRUE(q.is_zero());
}

TEST(FreePoly, RejectsLettersOutOfRange) {
  FreePoly p(2);
  EXPECT_THROW(p.add_term({3}, 1.0), PreconditionError);
  EXPECT_THROW(p.add_term({0}, 1.0), PreconditionError);
  EXPECT_THROW(FreePoly(0), DimensionError);
}

TEST(FreePoly, ArithmeticIsNoncommutative) {
  const FreePoly xy = X() * Y();
  const FreePoly yx = Y() * X();
  EXPECT_FALSE(xy == yx);
  EXPECT_EQ((X() + Y()).pow(2), X() * X() + xy + yx + Y() * Y());
  EXPECT_EQ(X().pow(0), FreePoly::constant(2, 1.0, Chart::xy));
  EXPECT_EQ((X() * Y() * X()).degree(), 3);
}

TEST(FreePoly, ChartsDoNotMix) {
  EXPECT_THROW(X() + U(), PreconditionError);
  EXPECT_THROW(to_uv(U()), PreconditionError);
  EXPECT_THROW(from_uv(X()), PreconditionError);
  EXPECT_THROW(v_parity_split(X()), PreconditionError);
}

TEST(FreePoly, TextForm) {
  const FreePoly p = cd{2.0} * X() * X() + X() * Y() - Y() * X();
  EXPECT_EQ(to_text(p), "2*x^2 + x*y - y*x");
  EXPECT_EQ(to_text(FreePoly(2, Chart::xy)), "0");
  EXPECT_EQ(to_text(cd{0.0, 1.0} * U() + FreePoly::constant(2, -3.0, Chart::uv)), "-3 + i*u");
}

TEST(Evaluate, EmptyWordIsIdentity) {
  std::mt19937_64 rng(1);
  const MatrixTuple x({random_gaussian_matrix(3, rng), random_gaussian_matrix(3, rng)});
  const CMatrix e = evaluate(FreePoly::constant(2, 1.0), x);
  EXPECT_LT((e - CMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(Evaluate, HandComputedProduct) {
  CMatrix a(2, 2), b(2, 2);
  a << 0, 1, 0, 0;
  b << 0, 0, 1, 0;
  const CMatrix r = evaluate(X() * Y(), MatrixTuple({a, b}));
  CMatrix expected(2, 2);
  expected << 1, 0, 0, 0;
  EXPECT_LT((r - expected).norm(), 1e-15);
}

TEST(Evaluate, AgreesWithTermByTermProducts) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const FreePoly p = random_poly(rng, 5, 8);
    const CMatrix a = random_gaussian_matrix(3, rng), b = random_gaussian_matrix(3, rng);
    const CMatrix lib = evaluate(p, MatrixTuple({a, b}));
    const CMatrix ref = oracle::naive_eval(p, {a, b});
    EXPECT_LE(relative_residual(lib, ref), 1e-12);
  }
}

TEST(Evaluate, RingHomomorphism) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const FreePoly p = random_poly(rng, 3, 5), q = random_poly(rng, 3, 5);
    const MatrixTuple x({random_gaussian_matrix(4, rng), random_gaussian_matrix(4, rng)});
    EXPECT_LE(relative_residual(evaluate(p * q, x), evaluate(p, x) * evaluate(q, x)), 1e-10);
    EXPECT_LE(relative_residual(evaluate(p + q, x), evaluate(p, x) + evaluate(q, x)), 1e-10);
  }
}

TEST(Evaluate, DirectSumsAndSimilarity) {
  std::mt19937_64 rng(4);
  const FreePoly p = random_poly(rng, 4, 6);
  const MatrixTuple x({random_gaussian_matrix(2, rng), random_gaussian_matrix(2, rng)});
  const MatrixTuple y({random_gaussian_matrix(3, rng), random_gaussian_matrix(3, rng)});
  EXPECT_LE(relative_residual(evaluate(p, direct_sum(x, y)), direct_sum(evaluate(p, x), evaluate(p, y))), 1e-12);
  const CMatrix s = random_invertible(2, rng, 10.0);
  EXPECT_LE(relative_residual(evaluate(p, conjugate(s, x)), conjugate(s, evaluate(p, x))), 1e-8);
}

TEST(Evaluate, DimensionMismatch) {
  std::mt19937_64 rng(5);
  const MatrixTuple x({random_gaussian_matrix(2, rng)});
  EXPECT_THROW(evaluate(X(), x), DimensionError);
}

TEST(Flip, SwapsLettersAndIsAnInvolution) {
  EXPECT_EQ(flip(X() * Y() * X()), Y() * X() * Y());
  EXPECT_EQ(flip(X() * X() * Y()), Y() * Y() * X());
  EXPECT_EQ(flip(X() + Y()), X() + Y());
  std::mt19937_64 rng(6);
  const FreePoly p = random_poly(rng, 5, 7);
  EXPECT_EQ(flip(flip(p)), p);
  EXPECT_THROW(flip(FreePoly(3)), DimensionError);
}

TEST(Symmetrize, Examples) {
  EXPECT_EQ(symmetrize(X()), cd{0.5} * (X() + Y()));
  EXPECT_EQ(symmetrize(X() * Y()), cd{0.5} * (X() * Y() + Y() * X()));
  const FreePoly s = X() * Y() + Y() * X();
  EXPECT_EQ(symmetrize(s), s);
  std::mt19937_64 rng(7);
  EXPECT_TRUE(is_symmetric(symmetrize(random_poly(rng, 4, 6))));
}

TEST(IsSymmetric, Examples) {
  EXPECT_TRUE(is_symmetric(X() * Y() + Y() * X()));
  EXPECT_FALSE(is_symmetric(X() * Y()));
  const FreePoly a = X() - Y(), b = X() + Y();
  EXPECT_TRUE(is_symmetric(a * b * a));
}

TEST(ChangeOfVariables, Examples) {
  EXPECT_EQ(to_uv(X() + Y()), cd{2.0} * U());
  EXPECT_EQ(to_uv(X() * Y() + Y() * X()), cd{2.0} * U() * U() - cd{2.0} * V() * V());
  EXPECT_EQ(from_uv(cd{2.0} * U()), X() + Y());
}

TEST(ChangeOfVariables, RoundTripOnIntegerCoefficients) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const FreePoly p = random_poly(rng, 6, 8);
    EXPECT_EQ(from_uv(to_uv(p)), p);
  }
}

TEST(VParity, SplitAndSymmetry) {
  auto [even, odd] = v_parity_split(U() * U() + V() * V() + U() * V());
  EXPECT_EQ(even, U() * U() + V() * V());
  EXPECT_EQ(odd, U() * V());

  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const FreePoly p = random_poly(rng, 5, 6);
    const FreePoly s = p + flip(p);
    EXPECT_TRUE(v_parity_split(to_uv(s)).second.is_zero());
    EXPECT_EQ(is_symmetric(p), v_parity_split(to_uv(p)).second.is_zero());
  }
}

TEST(SEvenOdd, SmallCases) {
  EXPECT_EQ(s_even(0), FreePoly::constant(2, 1.0, Chart::uv));
  EXPECT_EQ(s_odd(1), V());
  EXPECT_EQ(s_even(2), U() * U() + V() * V());
  EXPECT_EQ(s_even(3), U() * U() * U() + U() * V() * V() + V() * U() * V() + V() * V() * U());
  EXPECT_TRUE(v_parity_split(s_even(5)).second.is_zero());
  EXPECT_THROW(s_even(-1), PreconditionError);
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(s_even(n).size(), 1u << (n - 1));
    EXPECT_EQ(s_even(n).size() + s_odd(n).size(), 1u << n);
  }
}

TEST(SEvenOdd, FirstColumnOfTPowers) {
  std::mt19937_64 rng(10);
  const CMatrix u = random_gaussian_matrix(3, rng), v = random_gaussian_matrix(3, rng);
  for (int n = 0; n <= 6; ++n) {
    auto [top, bottom] = oracle::t_power_column(u, v, n);
    EXPECT_LE(relative_residual(evaluate(s_even(n), MatrixTuple({u, v})), top), 1e-12) << n;
    EXPECT_LE(relative_residual(evaluate(s_odd(n), MatrixTuple({u, v})), bottom), 1e-12) << n;
  }
}

TEST(SEvenOdd, PowerSums) {
  std::mt19937_64 rng(11);
  const CMatrix x = random_gaussian_matrix(3, rng), y = random_gaussian_matrix(3, rng);
  const MatrixTuple uv({0.5 * (x + y), 0.5 * (x - y)});
  for (int n = 0; n <= 8; ++n) {
    const CMatrix lhs = oracle::mpow(x, n) + oracle::mpow(y, n);
    EXPECT_LE(relative_residual(cd{2.0} * evaluate(s_even(n), uv), lhs), 1e-8) << n;
  }
}

TEST(BDelta, Membership) {
  const FreePoly x1 = FreePoly::letter(1, 1);
  const MatrixTuple zero({CMatrix::Zero(2, 2)});
  const MatrixTuple id({CMatrix::Identity(2, 2)});
  EXPECT_TRUE(in_B_delta({{x1}}, zero));
  EXPECT_FALSE(in_B_delta({{cd{2.0} * x1}}, id));
  EXPECT_DOUBLE_EQ(op_norm(eval_delta({{cd{2.0} * x1}}, id)), 2.0);
}

TEST(BDelta, NormOfDirectSumIsTheMaximum) {
  std::mt19937_64 rng(12);
  const FreePoly a = X(), b = Y() * X();
  const PolyMatrix delta{{a, b}, {b, cd{0.5} * a}};
  const MatrixTuple x({random_gaussian_matrix(2, rng), random_gaussian_matrix(2, rng)});
  const MatrixTuple y({random_gaussian_matrix(3, rng), random_gaussian_matrix(3, rng)});
  const double nx = op_norm(eval_delta(delta, x)), ny = op_norm(eval_delta(delta, y));
  const double nxy = op_norm(eval_delta(delta, direct_sum(x, y)));
  EXPECT_NEAR(nxy, std::max(nx, ny), 1e-10 * (1.0 + nxy));
}
