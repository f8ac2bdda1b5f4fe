#pragma once

// Seeded random generators for matrices and matrix tuples. Every generator
// takes the engine explicitly; parallel use needs independent streams.

#include <random>
#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/linalg.hpp"

namespace ncfree {

using Rng = std::mt19937_64;

template <class R>
CMatrix random_gaussian_matrix(Eigen::Index n, R& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

/// Invertible matrix with condition number below max_cond.
template <class R>
CMatrix random_invertible(Eigen::Index n, R& rng, double max_cond = 1e3) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    CMatrix m = random_gaussian_matrix(n, rng);
    const Eigen::VectorXd s = singular_values(m);
    if (s(s.size() - 1) * max_cond > s(0)) return m;
  }
  throw GenerationError("could not draw a well-conditioned matrix");
}

/// Complex point uniformly in the annulus lo <= |z| <= hi.
template <class R>
cd random_annulus_point(R& rng, double lo, double hi) {
  std::uniform_real_distribution<double> radius(lo, hi);
  std::uniform_real_distribution<double> angle(-3.141592653589793, 3.141592653589793);
  return std::polar(radius(rng), angle(rng));
}

/// n values with |a_i| >= lo and pairwise |a_i - a_j|, |a_i + a_j| >= min_gap.
template <class R>
std::vector<cd> random_separated_values(std::size_t n, R& rng, double lo, double hi, double min_gap) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<cd> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_annulus_point(rng, lo, hi));
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        ok = std::abs(v[i] - v[j]) >= min_gap && std::abs(v[i] + v[j]) >= min_gap;
    if (ok) return v;
  }
  throw GenerationError("could not draw separated values");
}

/// Constraints on random_tuple. For d = 2 the v-constraints refer to
/// v = (w^1 - w^2)/2; for d = 1 they refer to the single component.
struct TupleConstraints {
  bool v_invertible = false;
  bool v_in_Q = false;
  bool distinct_eigenvalues = false;
  bool unit_norm = false;
  /// v = P diag(l) P^{-1} with distinct nonzero l_i (and distinct squares),
  /// u = P A P^{-1} with every entry of A nonzero: the construction under
  /// which the fiber of pi is exactly {w, w^f}.
  bool generic_u = false;
  /// Resampling threshold used by the v predicates.
  double tol = kDefaultTol;
};

inline constexpr int kGenerationRetryCap = 200;

template <class R>
MatrixTuple random_tuple(Eigen::Index level, std::size_t d, const TupleConstraints& c, R& rng) {
  if (level < 1 || d < 1) throw DimensionError("random_tuple needs level >= 1 and d >= 1");
  if (c.generic_u && d != 2) throw PreconditionError("generic-u needs d = 2");
  for (int attempt = 0; attempt < kGenerationRetryCap; ++attempt) {
    std::vector<CMatrix> parts;
    if (c.generic_u) {
      const CMatrix p = random_invertible(level, rng, 50.0);
      const auto lambda = random_separated_values(static_cast<std::size_t>(level), rng, 0.5, 1.5, 0.2);
      Eigen::VectorXcd l(level);
      for (Eigen::Index i = 0; i < level; ++i) l(i) = lambda[static_cast<std::size_t>(i)];
      CMatrix a = random_gaussian_matrix(level, rng);
      for (Eigen::Index i = 0; i < level; ++i)
        for (Eigen::Index j = 0; j < level; ++j)
          if (std::abs(a(i, j)) < 0.1) a(i, j) += a(i, j) == cd{0.0} ? cd{0.5} : 0.5 * a(i, j) / std::abs(a(i, j));
      const CMatrix pinv = p.inverse();
      const CMatrix v = p * l.asDiagonal() * pinv;
      const CMatrix u = p * a * pinv;
      parts = {u + v, u - v};
    } else {
      for (std::size_t j = 0; j < d; ++j) parts.push_back(random_gaussian_matrix(level, rng));
    }
    if (c.unit_norm) {
      double m = 0.0;
      for (const auto& x : parts) m = std::max(m, op_norm(x));
      for (auto& x : parts) x /= m;
    }
    const CMatrix v = d == 2 ? CMatrix(0.5 * (parts[0] - parts[1])) : parts[0];
    if (c.v_invertible && !in_I(v, c.tol)) continue;
    if (c.v_in_Q && !in_Q(v, c.tol)) continue;
    if (c.distinct_eigenvalues) {
      const Spectrum s = spectrum(v);
      bool simple = true;
      const double gap = c.tol * (1.0 + s.spectral_radius());
      for (std::size_t i = 0; i + 1 < s.size() && simple; ++i)
        for (std::size_t j = i + 1; j < s.size() && simple; ++j)
          simple = std::abs(s.eigenvalues[i] - s.eigenvalues[j]) > gap;
      if (!simple) continue;
    }
    return MatrixTuple(std::move(parts));
  }
  throw GenerationError("random_tuple: retry cap exhausted");
}

}  // namespace ncfree
