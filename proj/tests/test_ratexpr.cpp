#include <random>

#include <gtest/gtest.h>

#include "ncfree/random.hpp"
#include "ncfree/ratexpr.hpp"

using namespace ncfree;

namespace {

const RatExpr a = RatExpr::var("alpha");
const RatExpr b = RatExpr::var("beta");
const RatExpr g = RatExpr::var("gamma");

CMatrix scalar1(cd z) { return CMatrix::Constant(1, 1, z); }

Assignment scalars(cd x, cd y, cd z) { return {{"alpha", scalar1(x)}, {"beta", scalar1(y)}, {"gamma", scalar1(z)}}; }

Assignment random_assignment(Eigen::Index n, std::mt19937_64& rng) {
  return {{"alpha", random_unit_matrix(n, rng)}, {"beta", random_unit_matrix(n, rng)}, {"gamma", random_unit_matrix(n, rng)}};
}

// A small expression exercising every node kind.
RatExpr sample_expr() {
  return cd{2.0} * a * RatExpr::inverse(b + RatExpr::scalar(3.0)) * g - b * a + RatExpr::scalar(cd{0.0, 1.0});
}

}  // namespace

TEST(RatEval, InverseOfScalarMultiple) {
  const CMatrix r = eval(RatExpr::inverse(b), {{"beta", 2.0 * CMatrix::Identity(2, 2)}});
  EXPECT_LT((r - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(RatEval, ScalarAnchor) {
  const RatExpr e = RatExpr::inverse(a - b * RatExpr::inverse(g) * b);
  EXPECT_NEAR(std::abs(eval(e, scalars(3, 1, 3))(0, 0) - 3.0 / 8.0), 0.0, 1e-15);
}

TEST(RatEval, SingularInverseReportsTheSubexpression) {
  const RatExpr e = RatExpr::inverse(RatExpr::scaled(0.0, a));
  try {
    eval(e, {{"alpha", CMatrix::Identity(2, 2)}});
    FAIL() << "expected SingularityError";
  } catch (const SingularityError& err) {
    EXPECT_FALSE(err.subexpression().empty());
  }
  EXPECT_THROW(eval(RatExpr::inverse(a), {{"alpha", CMatrix::Zero(2, 2)}}), SingularityError);
}

TEST(RatEval, AssignmentErrors) {
  EXPECT_THROW(eval(a + b, {{"alpha", CMatrix::Identity(2, 2)}}), AssignmentError);
  EXPECT_THROW(eval(a + b, {{"alpha", CMatrix::Identity(2, 2)}, {"beta", CMatrix::Identity(3, 3)}}),
               AssignmentError);
  EXPECT_THROW(eval(RatExpr::scalar(1.0), {}), AssignmentError);
  EXPECT_EQ(eval(RatExpr::scalar(1.0), {}, 3).rows(), 3);
}

TEST(RatEval, ScalarArithmeticAtLevelOne) {
  const cd x{1.3, -0.4}, y{0.7, 0.2}, z{-2.0, 0.5};
  const cd expected = 2.0 * x / (y + 3.0) * z - y * x + cd{0.0, 1.0};
  EXPECT_LE(std::abs(eval(sample_expr(), scalars(x, y, z))(0, 0) - expected), 1e-12);
}

TEST(RatEval, DirectSums) {
  std::mt19937_64 rng(1);
  const Assignment s = random_assignment(2, rng), t = random_assignment(3, rng);
  Assignment st;
  for (const auto& [k, v] : s) st[k] = direct_sum(v, t.at(k));
  const CMatrix lhs = eval(sample_expr(), st);
  EXPECT_LE(relative_residual(lhs, direct_sum(eval(sample_expr(), s), eval(sample_expr(), t))), 1e-10);
}

TEST(RatEval, Similarity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Assignment s = random_assignment(3, rng);
    const CMatrix sim = random_invertible(3, rng, 20.0);
    Assignment conj;
    for (const auto& [k, v] : s) conj[k] = conjugate(sim, v);
    EXPECT_LE(relative_residual(eval(sample_expr(), conj), conjugate(sim, eval(sample_expr(), s))), 1e-7);
  }
}

TEST(RatEquivalence, Examples) {
  std::mt19937_64 rng(3);
  const auto same = equivalent_probabilistic(g * RatExpr::inverse(b) * b, g, {1, 2, 3}, 5, 1e-8, rng);
  EXPECT_TRUE(same.equal_on_samples);
  EXPECT_EQ(same.per_level.size(), 3u);

  const auto distinct = equivalent_probabilistic(a * b, b * a, {2}, 5, 1e-8, rng);
  EXPECT_FALSE(distinct.equal_on_samples);
  ASSERT_TRUE(distinct.witness.has_value());
  EXPECT_EQ(distinct.witness->at("alpha").rows(), 2);
  EXPECT_GT(distinct.witness_residual, 1e-8);

  const RatExpr p_minus_1 = cd{2.0} * RatExpr::inverse(a - b * RatExpr::inverse(g) * b);
  const RatExpr restated = RatExpr::scaled(2.0, RatExpr::inverse(a - b * RatExpr::inverse(g) * b));
  EXPECT_TRUE(equivalent_probabilistic(p_minus_1, restated, {2, 3}, 5, 1e-8, rng).equal_on_samples);
}

TEST(RatEquivalence, InconclusiveOnAnEmptyDomain) {
  std::mt19937_64 rng(4);
  const RatExpr bad = RatExpr::inverse(a - a);
  EXPECT_THROW(equivalent_probabilistic(bad, a, {2}, 1, 1e-8, rng), InconclusiveError);
}

TEST(RatSubstitute, Examples) {
  const RatExpr u = RatExpr::var("u"), v = RatExpr::var("v");
  const RatExpr r = substitute(a + b, {{"alpha", u}});
  EXPECT_EQ(r.free_variables(), (std::set<std::string>{"beta", "u"}));

  const RatExpr p2 = cd{2.0} * (a * a + b);
  const RatExpr s = substitute(p2, {{"alpha", u}, {"beta", v * v}, {"gamma", v * u * v}});
  const auto lp = expand_laurent(s);
  ASSERT_TRUE(lp.has_value());
  const LaurentPoly expected = cd{2.0} * (LaurentPoly::letter("u") * LaurentPoly::letter("u") +
                                          LaurentPoly::letter("v") * LaurentPoly::letter("v"));
  EXPECT_EQ(*lp, expected);
}

TEST(RatSubstitute, CompositionLaw) {
  std::mt19937_64 rng(5);
  const RatExpr u = RatExpr::var("u"), v = RatExpr::var("v");
  const std::map<std::string, RatExpr> m{{"alpha", u + v}, {"beta", v * v}, {"gamma", RatExpr::inverse(u) * v}};
  for (int t = 0; t < 5; ++t) {
    const CMatrix um = random_unit_matrix(3, rng) + 2.0 * CMatrix::Identity(3, 3);
    const CMatrix vm = random_unit_matrix(3, rng);
    const Assignment uv{{"u", um}, {"v", vm}};
    const Assignment composed{{"alpha", um + vm}, {"beta", vm * vm}, {"gamma", um.inverse() * vm}};
    EXPECT_LE(relative_residual(eval(substitute(sample_expr(), m), uv), eval(sample_expr(), composed)), 1e-10);
  }
}

TEST(RatSubstitute, AssociativeWithComposition) {
  std::mt19937_64 rng(6);
  const RatExpr u = RatExpr::var("u"), v = RatExpr::var("v");
  const std::map<std::string, RatExpr> m1{{"alpha", u * v}, {"beta", u + v}, {"gamma", v}};
  const std::map<std::string, RatExpr> m2{{"u", v * v + RatExpr::scalar(1.0)}, {"v", RatExpr::inverse(u)}};
  std::map<std::string, RatExpr> m12;
  for (const auto& [k, e] : m1) m12[k] = substitute(e, m2);
  const RatExpr lhs = substitute(substitute(sample_expr(), m1), m2);
  const RatExpr rhs = substitute(sample_expr(), m12);
  EXPECT_TRUE(equivalent_probabilistic(lhs, rhs, {2, 3}, 5, 1e-8, rng).equal_on_samples);
}

TEST(RatText, InverseAndPowers) {
  EXPECT_EQ(to_text(RatExpr::inverse(b)), "inv(beta)");
  EXPECT_EQ(pow(a, 0).kind(), RatExpr::Kind::scalar);
  EXPECT_EQ(pow(a, -1).kind(), RatExpr::Kind::inverse);
}

TEST(Laurent, CancelsAdjacentInverses) {
  const auto e = expand_laurent(g * RatExpr::inverse(b) * b);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(*e, LaurentPoly::letter("gamma"));
  EXPECT_FALSE(expand_laurent(RatExpr::inverse(a + b)).has_value());
  const auto inv = expand_laurent(RatExpr::inverse(cd{2.0} * a * b));
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(*inv, cd{0.5} * LaurentPoly::letter("beta", true) * LaurentPoly::letter("alpha", true));
}
