#pragma once

// Property checks: nc-function axioms for black-box graded maps, the hat
// construction on finite graded maps, the symmetric similarity lemma, the
// Pascoe example, and the named regression suites behind `ncfree verify`.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncfree/domains.hpp"
#include "ncfree/errors.hpp"
#include "ncfree/funcalc.hpp"
#include "ncfree/girard.hpp"
#include "ncfree/json_io.hpp"
#include "ncfree/linalg.hpp"
#include "ncfree/random.hpp"
#include "ncfree/report.hpp"
#include "ncfree/symbasis.hpp"
#include "ncfree/words.hpp"

namespace ncfree {

/// Maps a level-n tuple to an n x n matrix.
using GradedMap = std::function<CMatrix(const MatrixTuple&)>;

/// Entrywise tolerance for matrix equality in finite-set operations.
inline constexpr double kFiniteSetTol = 1e-12;

// ---------------------------------------------------------------------------
// Small helpers

inline bool tuples_close(const MatrixTuple& a, const MatrixTuple& b, double tol = kFiniteSetTol) {
  if (a.d() != b.d() || a.n() != b.n()) return false;
  for (std::size_t j = 0; j < a.d(); ++j)
    if ((a[j] - b[j]).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

inline bool matrices_close(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

inline MatrixTuple tuple_block(const MatrixTuple& x, Eigen::Index start, Eigen::Index size) {
  std::vector<CMatrix> parts;
  for (const auto& m : x) parts.push_back(m.block(start, start, size, size));
  return MatrixTuple(std::move(parts));
}

/// Whether x is block diagonal for the split k + (n - k).
inline bool splits_at(const MatrixTuple& x, Eigen::Index k, double tol = kFiniteSetTol) {
  const Eigen::Index n = x.n();
  for (const auto& m : x) {
    if (m.block(0, k, k, n - k).cwiseAbs().maxCoeff() > tol) return false;
    if (m.block(k, 0, n - k, k).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

/// Basis of { s : a_j s = s b_j for all j }.
inline std::vector<CMatrix> intertwiner_basis(const MatrixTuple& a, const MatrixTuple& b, double tol = 1e-9) {
  if (a.d() != b.d()) throw DimensionError("intertwiner_basis: tuples of different d");
  const Eigen::Index n = a.n(), m = b.n();
  CMatrix big(static_cast<Eigen::Index>(a.d()) * n * m, n * m);
  const CMatrix in = CMatrix::Identity(n, n), im = CMatrix::Identity(m, m);
  for (std::size_t j = 0; j < a.d(); ++j) {
    // vec(a s) = (I_m kron a) vec(s), vec(s b) = (b^T kron I_n) vec(s)
    CMatrix blk = CMatrix::Zero(n * m, n * m);
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q)
        blk.block(p * n, q * n, n, n) = im(p, q) * a[j] - b[j](q, p) * in;
    big.block(static_cast<Eigen::Index>(j) * n * m, 0, n * m, n * m) = blk;
  }
  Eigen::JacobiSVD<CMatrix> svd(big, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  std::vector<CMatrix> out;
  for (Eigen::Index c = 0; c < n * m; ++c) {
    if (c < s.size() && s(c) > tol * scale) continue;
    const Eigen::VectorXcd vec = svd.matrixV().col(c);
    out.push_back(Eigen::Map<const CMatrix>(vec.data(), n, m));
  }
  return out;
}

/// An invertible s with b = s^{-1} a s, if a random element of the
/// intertwiner space is invertible.
template <class R>
std::optional<CMatrix> find_similarity(const MatrixTuple& a, const MatrixTuple& b, R& rng) {
  if (a.n() != b.n() || a.d() != b.d()) return std::nullopt;
  const auto basis = intertwiner_basis(a, b);
  if (basis.empty()) return std::nullopt;
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 5; ++attempt) {
    CMatrix s = CMatrix::Zero(a.n(), a.n());
    for (const auto& e : basis) s += cd(g(rng), g(rng)) * e;
    if (in_I(s, 1e-8)) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Samplers

/// (u + v, u - v) with ||u|| = ||v|| = 1 and cond(v) <= max_cond.
template <class R>
MatrixTuple sample_pair_v_invertible(Eigen::Index level, R& rng, double max_cond = 20.0) {
  CMatrix u = random_gaussian_matrix(level, rng);
  CMatrix v = random_invertible(level, rng, max_cond);
  u /= op_norm(u);
  v /= op_norm(v);
  return MatrixTuple({u + v, u - v});
}

/// A pair whose pi value keeps alpha, beta, gamma and the four negative-power
/// expressions at relative singular value at least `margin`, and both
/// components invertible.
template <class R>
MatrixTuple sample_negative_admissible(Eigen::Index level, R& rng, double margin = 1e-2) {
  for (int attempt = 0; attempt < kGenerationRetryCap; ++attempt) {
    MatrixTuple w = sample_pair_v_invertible(level, rng);
    if (!in_I(w[0], 1e-6) || !in_I(w[1], 1e-6)) continue;
    try {
      if (negative_domain_margin(pi(w)) >= margin) return w;
    } catch (const SingularityError&) {
    }
  }
  throw DomainError("no admissible sample for negative powers");
}

/// p + p^f for a random p with small integer coefficients and degree <= max_degree.
template <class R>
FreePoly random_symmetric_poly(int max_degree, R& rng, int terms = 6) {
  std::uniform_int_distribution<int> deg(0, max_degree), letter(1, 2), coef(-3, 3);
  FreePoly p(2, Chart::xy);
  for (int t = 0; t < terms; ++t) {
    Word w(static_cast<std::size_t>(deg(rng)));
    for (auto& l : w) l = letter(rng);
    int c = coef(rng);
    if (c == 0) c = 1;
    p.add_term(std::move(w), static_cast<double>(c));
  }
  return p + flip(p);
}

/// Diagonalizable matrix with eigenvalues drawn inside the discs of spec.
template <class R>
CMatrix sample_in_branch_domain(Eigen::Index level, const SimpleSet& set, R& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, set.centers.size() - 1);
  Eigen::VectorXcd lambda(level);
  for (Eigen::Index i = 0; i < level; ++i)
    lambda(i) = set.centers[pick(rng)] + random_annulus_point(rng, 0.0, 0.5 * set.radius);
  const CMatrix p = random_invertible(level, rng, 10.0);
  return p * lambda.asDiagonal() * p.inverse();
}

// ---------------------------------------------------------------------------
// nc axioms

namespace detail {

inline CMatrix eval_graded(const GradedMap& f, const MatrixTuple& x, const std::string& label) {
  try {
    return f(x);
  } catch (const std::exception& e) {
    throw EvaluatorError("graded map failed on " + label + " (level " + std::to_string(x.n()) + "): " + e.what());
  }
}

struct WorstCase {
  double residual = 0.0;
  bool pass = true;
  nlohmann::json witness = nullptr;

  // Keeps the witness of the first failure, or of the largest residual
  // while everything passes.
  void record(double r, double tol, nlohmann::json w) {
    const bool ok = r <= tol;
    if (pass && (!ok || r >= residual)) witness = std::move(w);
    residual = std::max(residual, r);
    pass = pass && ok;
  }
};

}  // namespace detail

/// Gradedness, direct sums, similarity and intertwining checks of f on the
/// given samples (each in the domain of f, which must be closed under the
/// constructions used). Residuals are relative: ||a - b|| / (1 + ||b||).
inline Report check_nc_properties(const GradedMap& f, const std::vector<MatrixTuple>& samples, double tol = 1e-8,
                                  std::uint64_t seed = 0) {
  if (samples.empty()) throw PreconditionError("check_nc_properties needs samples");
  Rng rng(seed);
  Report r;
  r.seed = seed;
  r.tolerances["nc"] = tol;
  const std::size_t m = samples.size();
  std::vector<CMatrix> values;
  detail::WorstCase graded, sums, sim, inter;
  for (std::size_t i = 0; i < m; ++i) {
    values.push_back(detail::eval_graded(f, samples[i], "sample " + std::to_string(i)));
    const bool ok = values[i].rows() == samples[i].n() && values[i].cols() == samples[i].n();
    graded.record(ok ? 0.0 : 1.0, 0.5, {{"sample", i}, {"level", samples[i].n()}});
  }
  for (std::size_t i = 0; i < m && graded.pass; ++i) {
    const std::size_t j = (i + 1) % m;
    const MatrixTuple &x = samples[i], &y = samples[j];
    if (x.d() != y.d()) throw DimensionError("samples with different d");
    const std::string label = "samples " + std::to_string(i) + "," + std::to_string(j);

    const CMatrix fs = detail::eval_graded(f, direct_sum(x, y), "direct sum of " + label);
    const CMatrix expect = direct_sum(values[i], values[j]);
    sums.record(relative_residual(fs, expect), tol, {{"samples", {i, j}}, {"x", tuple_to_json(x)}, {"y", tuple_to_json(y)}});

    const CMatrix s = random_invertible(x.n(), rng, 20.0);
    const CMatrix fsim = detail::eval_graded(f, conjugate(s, x), "similarity of sample " + std::to_string(i));
    sim.record(relative_residual(fsim, conjugate(s, values[i])), tol,
               {{"sample", i}, {"x", tuple_to_json(x)}, {"s", matrix_to_json(s)}});

    // z = [[x, c], [0, y]]: z [I; 0] = [I; 0] x and [0 I] z = y [0 I].
    const Eigen::Index nx = x.n(), ny = y.n();
    std::vector<CMatrix> zparts;
    for (std::size_t k = 0; k < x.d(); ++k) {
      CMatrix z = CMatrix::Zero(nx + ny, nx + ny);
      z.topLeftCorner(nx, nx) = x[k];
      z.bottomRightCorner(ny, ny) = y[k];
      CMatrix c = random_gaussian_matrix(std::max(nx, ny), rng).topLeftCorner(nx, ny);
      z.topRightCorner(nx, ny) = 0.25 * c;
      zparts.push_back(std::move(z));
    }
    const MatrixTuple z(std::move(zparts));
    const CMatrix fz = detail::eval_graded(f, z, "block triangular extension of " + label);
    const double r1 = relative_residual(fz.leftCols(nx), [&] {
      CMatrix e = CMatrix::Zero(nx + ny, nx);
      e.topRows(nx) = values[i];
      return e;
    }());
    const double r2 = relative_residual(fz.bottomRows(ny), [&] {
      CMatrix e = CMatrix::Zero(ny, nx + ny);
      e.rightCols(ny) = values[j];
      return e;
    }());
    inter.record(std::max(r1, r2), tol, {{"samples", {i, j}}, {"z", tuple_to_json(z)}});
  }
  r.add("graded", graded.pass, graded.residual, graded.witness);
  if (!graded.pass) return r;
  r.add("direct_sum", sums.pass, sums.residual, sums.witness);
  r.add("similarity", sim.pass, sim.residual, sim.witness);
  r.add("intertwining", inter.pass, inter.residual, inter.witness);
  return r;
}

// ---------------------------------------------------------------------------
// Finite graded maps and the hat construction

struct FiniteGradedMap {
  std::vector<MatrixTuple> domain;
  std::vector<CMatrix> values;

  void validate() const {
    if (domain.size() != values.size()) throw DimensionError("domain and values differ in length");
  }

  std::optional<std::size_t> index_of(const MatrixTuple& x) const {
    for (std::size_t i = 0; i < domain.size(); ++i)
      if (tuples_close(domain[i], x)) return i;
    return std::nullopt;
  }
};

/// One way of writing an element of D as a (+) y with a in D.
struct HatSplit {
  std::size_t element;  // index of a (+) y in D
  std::size_t top;      // index of a in D
  Eigen::Index k;       // size of a
  MatrixTuple y;
};

inline std::vector<HatSplit> hat_splits(const std::vector<MatrixTuple>& d) {
  FiniteGradedMap lookup{d, std::vector<CMatrix>(d.size())};
  std::vector<HatSplit> out;
  for (std::size_t e = 0; e < d.size(); ++e) {
    const Eigen::Index n = d[e].n();
    for (Eigen::Index k = 1; k < n; ++k) {
      if (!splits_at(d[e], k)) continue;
      if (auto top = lookup.index_of(tuple_block(d[e], 0, k)))
        out.push_back({e, *top, k, tuple_block(d[e], k, n - k)});
    }
  }
  return out;
}

/// { y : x (+) y in D for some x in D }, without repetitions.
inline std::vector<MatrixTuple> hat_domain(const std::vector<MatrixTuple>& d) {
  std::vector<MatrixTuple> out;
  for (const auto& s : hat_splits(d)) {
    bool seen = false;
    for (const auto& y : out) seen = seen || tuples_close(y, s.y);
    if (!seen) out.push_back(s.y);
  }
  return out;
}

struct AncResult {
  Report report;
  bool anc = false;
  FiniteGradedMap f_hat;  // defined on hat_domain(D)
};

/// Similarity preservation on D and existence of f-hat with
/// f(x (+) y) = f(x) (+) f-hat(y).
inline AncResult check_anc(const FiniteGradedMap& f, double tol = 1e-10, std::uint64_t seed = 0) {
  f.validate();
  Rng rng(seed);
  AncResult out;
  Report& r = out.report;
  r.seed = seed;
  r.tolerances["anc"] = tol;

  detail::WorstCase graded;
  for (std::size_t i = 0; i < f.domain.size(); ++i) {
    const bool ok = f.values[i].rows() == f.domain[i].n() && f.values[i].cols() == f.domain[i].n();
    graded.record(ok ? 0.0 : 1.0, 0.5, {{"element", i}});
  }
  r.add("graded", graded.pass, graded.residual, graded.witness);
  if (!graded.pass) return out;

  detail::WorstCase sim;
  for (std::size_t i = 0; i < f.domain.size(); ++i) {
    const MatrixTuple& x = f.domain[i];
    for (const auto& c : intertwiner_basis(x, x)) {
      const double res = op_norm(f.values[i] * c - c * f.values[i]) / (1.0 + op_norm(c));
      sim.record(res, tol, {{"element", i}, {"commutant", matrix_to_json(c)}});
    }
    for (std::size_t j = i + 1; j < f.domain.size(); ++j) {
      if (auto s = find_similarity(x, f.domain[j], rng)) {
        const double res = relative_residual(f.values[j], conjugate(*s, f.values[i]));
        sim.record(res, tol, {{"elements", {i, j}}, {"s", matrix_to_json(*s)}});
      }
    }
  }
  r.add("similarity", sim.pass, sim.residual, sim.witness);

  detail::WorstCase compat;
  for (const auto& s : hat_splits(f.domain)) {
    const CMatrix& fx = f.values[s.element];
    const Eigen::Index n = fx.rows(), k = s.k;
    double res = (fx.topLeftCorner(k, k) - f.values[s.top]).cwiseAbs().maxCoeff();
    res = std::max(res, fx.topRightCorner(k, n - k).cwiseAbs().maxCoeff());
    res = std::max(res, fx.bottomLeftCorner(n - k, k).cwiseAbs().maxCoeff());
    compat.record(res, tol, {{"element", s.element}, {"split", k}});
    if (res > tol) continue;
    const CMatrix fy = fx.bottomRightCorner(n - k, n - k);
    if (auto at = out.f_hat.index_of(s.y)) {
      if (!matrices_close(out.f_hat.values[*at], fy, tol))
        throw ContradictionError("two decompositions give different values of f-hat on the same point");
    } else {
      out.f_hat.domain.push_back(s.y);
      out.f_hat.values.push_back(fy);
    }
  }
  r.add("direct_sum_compatibility", compat.pass, compat.residual, compat.witness);
  out.anc = r.passed();
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric similarity and the Pascoe example

/// For symmetric p: pi(w1) = s^{-1} pi(w2) s with w1 in S_o implies
/// p(w1) = s^{-1} p(w2) s.
inline Report check_symmetric_similarity(const FreePoly& p, const MatrixTuple& w1, const MatrixTuple& w2,
                                         const CMatrix& s, double tol = 1e-8) {
  if (!is_symmetric(p)) throw NotSymmetric("check_symmetric_similarity needs a symmetric polynomial");
  const FreePoly px = p.chart() == Chart::uv ? from_uv(p) : p;
  require_pair(w1);
  require_pair(w2);
  if (w1.n() != w2.n() || s.rows() != w1.n() || s.cols() != w1.n())
    throw DimensionError("w1, w2 and s must share the level");
  if (!in_I(v_part(w1))) throw PreconditionError("w1^1 - w1^2 is not invertible");
  if (!in_I(s)) throw PreconditionError("s is not invertible");
  const PiValue a = pi(w1), b = pi(w2);
  const double pre = std::max({relative_residual(a.alpha, conjugate(s, b.alpha)),
                               relative_residual(a.beta, conjugate(s, b.beta)),
                               relative_residual(a.gamma, conjugate(s, b.gamma))});
  if (pre > tol) throw PreconditionError("pi(w1) != s^{-1} pi(w2) s (residual " + std::to_string(pre) + ")");
  Report r;
  r.tolerances["symmetric_similarity"] = tol;
  const CMatrix p1 = evaluate(px, w1);
  const CMatrix p2 = evaluate(px, w2);
  const double res = op_norm(p1 - conjugate(s, p2)) / (1.0 + op_norm(p1));
  r.add("symmetric_similarity", res <= tol, res);
  return r;
}

/// (x - y)(x + y)^2 (x - y) = 16 v u^2 v.
inline FreePoly pascoe_f() {
  const FreePoly x = FreePoly::letter(2, 1, Chart::xy);
  const FreePoly y = FreePoly::letter(2, 2, Chart::xy);
  const FreePoly a = x - y, b = x + y;
  return a * b * b * a;
}

struct PascoeData {
  MatrixTuple w, W;
};

/// v = r(E12 + E34), V = r(-E12 + E34), u = U = scale (E21 + E13) in M_4.
inline PascoeData pascoe_pair(double r, double scale) {
  auto e = [](int i, int j) {
    CMatrix m = CMatrix::Zero(4, 4);
    m(i - 1, j - 1) = 1.0;
    return m;
  };
  const CMatrix v = r * (e(1, 2) + e(3, 4));
  const CMatrix vv = r * (-e(1, 2) + e(3, 4));
  const CMatrix u = scale * (e(2, 1) + e(1, 3));
  return {MatrixTuple({u + v, u - v}), MatrixTuple({u + vv, u - vv})};
}

/// pi(w) = pi(W) but f(w) != f(W) for f = (x - y)(x + y)^2 (x - y), so f
/// does not factor through pi on the nc bidisc.
inline Report pascoe_counterexample(double r = 0.1, double scale = 0.4) {
  if (!(r >= 0.0)) throw PreconditionError("r must be nonnegative");
  const PascoeData d = pascoe_pair(r, scale);
  for (const auto* t : {&d.w, &d.W})
    for (const auto& m : *t)
      if (!(op_norm(m) < 1.0)) throw PreconditionError("pair components must have norm < 1");
  Report rep;
  rep.tolerances["pi_equal"] = 1e-12;
  rep.tolerances["entry_14"] = 1e-10;
  const double dpi = pi_distance(pi(d.w), pi(d.W));
  rep.add("pi_equal", dpi <= 1e-12, dpi, {{"w", tuple_to_json(d.w)}, {"W", tuple_to_json(d.W)}});
  const FreePoly f = pascoe_f();
  const CMatrix diff = evaluate(f, d.w) - evaluate(f, d.W);
  const double expected = 32.0 * r * r * scale * scale;
  const double err = std::abs(diff(0, 3) - expected);
  rep.add("entry_14", err <= 1e-10, err, {{"value", complex_to_json(diff(0, 3))}, {"expected", expected}});
  const CMatrix beta = pi(d.w).beta;
  const double bnorm = op_norm(beta);
  rep.add("beta_zero", bnorm == 0.0, bnorm);
  rep.add("outside_S_o", !in_S_o(d.w), in_S_o(d.w) ? 1.0 : 0.0);
  return rep;
}

// ---------------------------------------------------------------------------
// Identities used by the suites

/// P_n under alpha -> u, beta -> v v, gamma -> v u v, expanded in the free
/// group algebra on u, v.
inline std::optional<LaurentPoly> girard_expand_back(int n) {
  auto lp = expand_laurent(girard_positive(n).P);
  if (!lp) return std::nullopt;
  const LaurentPoly u = LaurentPoly::letter("u"), v = LaurentPoly::letter("v");
  return lp->substitute({{kAlpha, u}, {kBeta, v * v}, {kGamma, v * u * v}});
}

inline LaurentPoly laurent_from_uv(const FreePoly& p) {
  LaurentPoly out;
  for (const auto& [w, c] : p.terms()) {
    LaurentWord lw;
    for (int l : w) lw.push_back({l == 1 ? "u" : "v", false});
    out.add(std::move(lw), c);
  }
  return out;
}

/// Rank of the coefficient matrix of the decomposed orbit basis of degree d
/// over the generator words of weighted degree d.
inline Eigen::Index symmetric_space_rank(int d) {
  const auto basis = symmetric_orbit_basis(d);
  const auto words = generator_words(d);
  std::map<GenWord, Eigen::Index, GenOrder> index;
  for (const auto& w : words) index.emplace(w, static_cast<Eigen::Index>(index.size()));
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(words.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const GenPoly g = decompose_symmetric(basis[i]);
    for (const auto& [w, c] : g.terms()) {
      auto it = index.find(w);
      if (it == index.end()) throw NumericalError("decomposition left the generator space");
      m(static_cast<Eigen::Index>(i), it->second) = c;
    }
  }
  return numerical_rank(m, 1e-10);
}

// ---------------------------------------------------------------------------
// Suites

namespace detail {

inline void add_sub_report(Report& into, const Report& from, const std::string& prefix) { into.append(from, prefix); }

inline Report suite_nc(std::uint64_t seed) {
  Report r;
  Rng rng(seed);
  std::vector<MatrixTuple> pairs;
  for (Eigen::Index level : {1, 2, 3, 1, 2}) pairs.push_back(sample_pair_v_invertible(level, rng));

  const FreePoly poly = [] {
    const FreePoly x = FreePoly::letter(2, 1, Chart::xy), y = FreePoly::letter(2, 2, Chart::xy);
    return x * y * x + cd{2.0} * y * y - x + FreePoly::constant(2, 1.0, Chart::xy);
  }();
  add_sub_report(r, check_nc_properties([&](const MatrixTuple& w) { return evaluate(poly, w); }, pairs, 1e-8, seed),
                 "polynomial.");

  const BranchSpec spec{{cd{1.0}, cd{-2.0}, cd{0.0, 3.0}}, default_radius({cd{1.0}, cd{-2.0}, cd{0.0, 3.0}}),
                        {1, -1, 1}};
  std::vector<MatrixTuple> singles;
  for (Eigen::Index level : {1, 2, 3, 2, 1}) singles.push_back(MatrixTuple({sample_in_branch_domain(level, spec.simple_set(), rng)}));
  add_sub_report(r, check_nc_properties([&](const MatrixTuple& x) { return sqrt_branch_S(x[0], spec); }, singles, 1e-8, seed),
                 "S.");
  add_sub_report(r, check_nc_properties([&](const MatrixTuple& x) { return involution_I(x[0], spec); }, singles, 1e-8, seed),
                 "I.");

  for (int n : {3, -2}) {
    const GirardPair g = girard(n);
    std::vector<MatrixTuple> samples;
    for (Eigen::Index level : {1, 2, 3, 2}) samples.push_back(n < 0 ? sample_negative_admissible(level, rng) : sample_pair_v_invertible(level, rng));
    add_sub_report(r,
                   check_nc_properties([&](const MatrixTuple& w) { return eval(g.P, pi_assignment(pi(w))); }, samples,
                                       1e-7, seed),
                   "P" + std::to_string(n) + ".");
  }

  // The two maps below are graded but not nc; the checks must catch them.
  const Report conj = check_nc_properties([](const MatrixTuple& w) { return CMatrix(w[0].conjugate()); }, pairs, 1e-8, seed);
  const Check* c = conj.find("similarity");
  r.add("counterexample.conjugate_fails_similarity", c && !c->pass, c ? c->residual : 0.0, c ? c->witness : nullptr);
  const Report trunc = check_nc_properties(
      [](const MatrixTuple& w) {
        CMatrix out = CMatrix::Zero(w.n(), w.n());
        out(0, 0) = w[0](0, 0);
        return out;
      },
      pairs, 1e-8, seed);
  const Check* g = trunc.find("graded");
  const Check* ds = trunc.find("direct_sum");
  r.add("counterexample.truncation_graded", g && g->pass, g ? g->residual : 1.0);
  r.add("counterexample.truncation_fails_direct_sum", ds && !ds->pass, ds ? ds->residual : 0.0, ds ? ds->witness : nullptr);
  return r;
}

inline MatrixTuple scalar_diag(std::initializer_list<cd> values) { return MatrixTuple({diagonal(values)}); }

inline Report suite_anc(std::uint64_t seed) {
  Report r;
  const MatrixTuple x321 = scalar_diag({3.0, 2.0, 1.0});
  const MatrixTuple x3 = scalar_diag({3.0});
  const MatrixTuple x21 = scalar_diag({2.0, 1.0});

  const auto h1 = hat_domain({x321});
  r.add("hat_domain.single", h1.empty(), static_cast<double>(h1.size()));
  const auto h2 = hat_domain({x321, x3});
  const bool h2ok = h2.size() == 1 && tuples_close(h2.front(), x21);
  r.add("hat_domain.pair", h2ok, h2ok ? 0.0 : 1.0);

  const cd a = 5.0, b = cd(1.0, 2.0), c = -7.0;
  const AncResult res = check_anc({{x321, x3}, {diagonal({a, b, c}), diagonal({a})}}, 1e-10, seed);
  const bool fhat = res.anc && res.f_hat.domain.size() == 1 && tuples_close(res.f_hat.domain[0], x21) &&
                    matrices_close(res.f_hat.values[0], diagonal({b, c}), 1e-12);
  r.add("anc.f_hat", fhat, fhat ? 0.0 : 1.0);

  const AncResult diag = check_anc({{x321}, {diagonal({1.0, 4.0, 9.0})}}, 1e-10, seed);
  r.add("anc.diagonal", diag.anc && diag.f_hat.domain.empty(), diag.anc ? 0.0 : 1.0);

  CMatrix nondiag = diagonal({1.0, 4.0, 9.0});
  nondiag(0, 1) = 1.0;
  const AncResult bad = check_anc({{x321}, {nondiag}}, 1e-10, seed);
  const Check* sim = bad.report.find("similarity");
  r.add("anc.nondiagonal_fails", sim && !sim->pass, sim ? sim->residual : 0.0, sim ? sim->witness : nullptr);
  return r;
}

inline Report suite_girard(std::uint64_t seed) {
  Report r;
  Rng rng(seed);
  for (int n = 0; n <= 8; ++n) {
    const auto back = girard_expand_back(n);
    const bool ok = back && *back == laurent_from_uv(girard_polynomial_form(n));
    r.add("expand_back_n=" + std::to_string(n), ok, ok ? 0.0 : 1.0);
  }
  for (int n = 0; n <= 8; ++n)
    for (Eigen::Index level : {2, 3})
      for (int t = 0; t < 3; ++t) r.append(verify_girard(n, sample_pair_v_invertible(level, rng), 1e-8));
  for (int n = -1; n >= -4; --n)
    for (Eigen::Index level : {2, 3})
      for (int t = 0; t < 3; ++t) r.append(verify_girard(n, sample_negative_admissible(level, rng), 1e-7));
  const MatrixTuple scalars({scalar_matrix(4.0, 1), scalar_matrix(2.0, 1)});
  const PiValue p = pi(scalars);
  const double pres = std::abs(p.alpha(0, 0) - 3.0) + std::abs(p.beta(0, 0) - 1.0) + std::abs(p.gamma(0, 0) - 3.0);
  r.add("scalar_pi", pres <= 1e-12, pres);
  const double pm1 = std::abs(eval(girard(-1).P, pi_assignment(p))(0, 0) - 0.75);
  r.add("scalar_P-1", pm1 <= 1e-12, pm1);
  return r;
}

inline Report suite_pascoe(std::uint64_t) { return pascoe_counterexample(0.1, 0.4); }

inline Report suite_symbasis(std::uint64_t seed) {
  Report r;
  Rng rng(seed);
  for (int d = 1; d <= 6; ++d) {
    const auto rank = symmetric_space_rank(d);
    const auto expected = static_cast<Eigen::Index>(1) << (d - 1);
    const bool ok = rank == expected && static_cast<Eigen::Index>(generator_words(d).size()) == expected;
    r.add("dimension_d=" + std::to_string(d), ok, static_cast<double>(std::abs(rank - expected)));
  }
  double worst_rt = 0.0, worst_num = 0.0;
  for (int t = 0; t < 20; ++t) {
    const FreePoly p = random_symmetric_poly(5, rng);
    const bool exact = expand_back(decompose_symmetric(p)) == to_uv(p);
    worst_rt = std::max(worst_rt, exact ? 0.0 : 1.0);
    const RatExpr f = factor_through_pi(p);
    const MatrixTuple w = sample_pair_v_invertible(3, rng);
    const CMatrix pw = evaluate(p, w);
    const CMatrix fw = p.is_zero() ? CMatrix::Zero(3, 3) : CMatrix(eval(f, pi_assignment(pi(w))));
    worst_num = std::max(worst_num, op_norm(pw - fw) / (1.0 + op_norm(pw)));
  }
  r.add("round_trip", worst_rt == 0.0, worst_rt);
  r.add("factor_through_pi", worst_num <= 1e-8, worst_num);
  return r;
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"nc", "anc", "girard", "pascoe", "symbasis"};
  return names;
}

inline Report run_suite(const std::string& name, std::uint64_t seed) {
  Report r;
  if (name == "nc") r = detail::suite_nc(seed);
  else if (name == "anc") r = detail::suite_anc(seed);
  else if (name == "girard") r = detail::suite_girard(seed);
  else if (name == "pascoe") r = detail::suite_pascoe(seed);
  else if (name == "symbasis") r = detail::suite_symbasis(seed);
  else throw PreconditionError("unknown suite '" + name + "'");
  r.seed = seed;
  return r;
}

}  // namespace ncfree
