#pragma once

// The free square root sqrt(x) = { y in alg(x) : y^2 = x } as a multivalued
// function: existence test, enumeration of all 2^k branches, and fibers of
// the Riemann surface { (M, N) : N in sqrt(M) }.

#include <utility>
#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/funcalc.hpp"
#include "ncfree/linalg.hpp"
#include "ncfree/simple_set.hpp"

namespace ncfree {

/// False iff x has a nilpotent Jordan block of size >= 2 at 0, detected as
/// rank(x) != rank(x^2).
inline bool sqrt_exists(const CMatrix& x, double tol = kDefaultTol) {
  const double scale = op_norm(x);
  if (scale == 0.0) return true;
  const Eigen::Index r1 = numerical_rank(x, tol, scale);
  const Eigen::Index r2 = numerical_rank(x * x, tol, scale * scale);
  return r1 == r2;
}

struct SqrtOptions {
  /// Eigenvalues within gap_rel * spectral radius are one spectral cluster.
  double gap_rel = 1e-6;
  double tol = kDefaultTol;
  InterpolationOptions interpolation{};
};

struct RootSet {
  CMatrix base;
  std::vector<CMatrix> roots;
  int k = 0;                           // nonzero spectral clusters
  BranchSpec spec;                     // centers and radius; tau unused
  std::vector<std::vector<int>> taus;  // branch sign vector per root
  std::vector<double> residuals;       // ||y^2 - x|| / (1 + ||x||)
  std::vector<double> alg_residuals;   // least-squares distance to alg(x)
  bool extended = false;               // singular x with semisimple 0 part
};

/// Clusters sigma(x) and builds the branch centers and radius. The zero
/// cluster (the nullity-many smallest eigenvalues) is returned separately.
struct SpectralBranches {
  BranchSpec spec;
  std::vector<cd> zero_eigenvalues;
};

inline SpectralBranches spectral_branches(const CMatrix& x, const SqrtOptions& opt = {}) {
  const Spectrum s = spectrum(x);
  const double xnorm = op_norm(x);
  const Eigen::Index nullity = x.rows() - numerical_rank(x, opt.tol, xnorm);

  std::vector<cd> eig = s.eigenvalues;
  std::sort(eig.begin(), eig.end(), [](cd a, cd b) { return std::abs(a) < std::abs(b); });
  SpectralBranches out;
  out.zero_eigenvalues.assign(eig.begin(), eig.begin() + nullity);
  Spectrum nonzero;
  nonzero.eigenvalues.assign(eig.begin() + nullity, eig.end());
  std::sort(nonzero.eigenvalues.begin(), nonzero.eigenvalues.end(), complex_lex_less);
  if (nonzero.eigenvalues.empty()) return out;

  const double gap = opt.gap_rel * nonzero.spectral_radius();
  std::vector<cd> centers;
  double spread = 0.0;
  for (const auto& c : nonzero.cluster(gap)) {
    centers.push_back(c.center);
    spread = std::max(spread, c.spread);
  }
  const SimpleSet set = make_simple_set(centers);
  if (!set.is_t_isolated(0.25) || !set.excludes_zero())
    throw ClusteringError("spectral clusters cannot be covered by a quarter-isolated simple set");
  if (spread >= set.radius * (1.0 - kContainmentMargin))
    throw ClusteringError("a spectral cluster is wider than the admissible radius");
  out.spec = BranchSpec{centers, set.radius, std::vector<int>(centers.size(), 1)};
  return out;
}

/// Every y in alg(x) with y^2 = x: one root per sign vector tau, 2^k in all.
inline RootSet all_square_roots(const CMatrix& x, const SqrtOptions& opt = {}) {
  if (x.rows() != x.cols() || x.rows() == 0) throw DimensionError("square matrix required");
  if (!sqrt_exists(x, opt.tol)) throw PreconditionError("x has no square root: nilpotent Jordan block at 0");
  const SpectralBranches br = spectral_branches(x, opt);

  RootSet rs;
  rs.base = x;
  rs.k = static_cast<int>(br.spec.gamma.size());
  rs.spec = br.spec;
  rs.extended = !br.zero_eigenvalues.empty();
  const double xnorm = op_norm(x);

  if (rs.k == 0) {
    // x is (numerically) zero on a semisimple space: the only root is 0.
    rs.roots.push_back(CMatrix::Zero(x.rows(), x.cols()));
    rs.taus.emplace_back();
    rs.residuals.push_back(op_norm(x) / (1.0 + xnorm));
    rs.alg_residuals.push_back(0.0);
    return rs;
  }

  if (rs.extended) {
    // The extension covers a semisimple 0 part next to semisimple nonzero
    // clusters only; a cluster is semisimple iff rank(x - cI) = n - m.
    const Eigen::Index n = x.rows();
    const SimpleSet set = br.spec.simple_set();
    const double rank_tol = std::max(opt.tol, 10.0 * opt.gap_rel);
    const auto eig = spectrum(x).eigenvalues;
    for (std::size_t i = 0; i < set.centers.size(); ++i) {
      const cd c = set.centers[i];
      Eigen::Index m = 0;
      for (cd z : eig)
        if (set.disc_of(z) == i) ++m;
      const CMatrix shifted = x - c * CMatrix::Identity(n, n);
      if (numerical_rank(shifted, rank_tol, xnorm) > n - m)
        throw Unsupported("singular x with a defective nonzero eigenvalue");
    }
  }

  double zero_radius = opt.tol * xnorm;
  for (cd z : br.zero_eigenvalues) zero_radius = std::max(zero_radius, 2.0 * std::abs(z));
  for (const auto& tau : all_taus(br.spec.gamma.size())) {
    const BranchSpec spec = with_tau(br.spec, tau);
    ScalarBranch f = sqrt_germ(spec);
    if (rs.extended) {
      // 0-cluster maps to 0; derivatives there never matter because the
      // 0 part is semisimple.
      const ScalarBranch base = f;
      const SimpleSet set = spec.simple_set();
      f.taylor = [base, set, zero_radius](cd z, int m) {
        if (!set.contains(z) && std::abs(z) <= zero_radius)
          return std::vector<cd>(static_cast<std::size_t>(m + 1), 0.0);
        return base.taylor(z, m);
      };
      f.domain = [set, zero_radius](cd z) { return set.contains(z) || std::abs(z) <= zero_radius; };
    }
    CMatrix y = matrix_function(x, f, opt.interpolation);
    rs.residuals.push_back(op_norm(y * y - x) / (1.0 + xnorm));
    rs.alg_residuals.push_back(alg_residual(x, y));
    rs.roots.push_back(std::move(y));
    rs.taus.push_back(tau);
  }
  for (std::size_t i = 0; i < rs.roots.size(); ++i)
    for (std::size_t j = i + 1; j < rs.roots.size(); ++j)
      if (op_norm(rs.roots[i] - rs.roots[j]) <= opt.tol * (1.0 + xnorm))
        throw NumericalError("enumerated square roots are not pairwise distinct");
  return rs;
}

/// Pairs (M, N) with N ranging over all square roots of M in alg(M).
inline std::vector<std::pair<CMatrix, CMatrix>> riemann_fiber(const CMatrix& m, const SqrtOptions& opt = {}) {
  if (!in_I(m, opt.tol)) throw PreconditionError("riemann_fiber requires an invertible matrix");
  const RootSet rs = all_square_roots(m, opt);
  std::vector<std::pair<CMatrix, CMatrix>> out;
  out.reserve(rs.roots.size());
  for (const auto& y : rs.roots) out.emplace_back(m, y);
  return out;
}

/// y -> (y^2, y).
inline std::pair<CMatrix, CMatrix> sigma_map(const CMatrix& y) { return {y * y, y}; }

inline CMatrix sigma_inverse(const std::pair<CMatrix, CMatrix>& point) { return point.second; }

}  // namespace ncfree
