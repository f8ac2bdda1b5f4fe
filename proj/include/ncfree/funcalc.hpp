#pragma once

// Primary matrix functions f(x) in alg(x).
//
// f(x) is computed as p(x) where p is the Hermite interpolant of f on the
// spectrum of x (each eigenvalue a confluent node repeated to its algebraic
// multiplicity). For f holomorphic near sigma(x) this agrees with the Riesz
// functional calculus, and p(x) lies in span{I, x, ..., x^{n-1}} by
// construction.

#include <functional>
#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/linalg.hpp"
#include "ncfree/simple_set.hpp"

namespace ncfree {

/// Scalar germ data: taylor(z, m) returns f^{(k)}(z) / k! for k = 0..m.
/// `domain`, when set, must contain every eigenvalue the function is
/// applied to.
struct ScalarBranch {
  std::function<std::vector<cd>(cd, int)> taylor;
  std::function<bool(cd)> domain;
};

inline ScalarBranch constant_branch(cd c) {
  return {[c](cd, int m) {
            std::vector<cd> t(static_cast<std::size_t>(m + 1), 0.0);
            t[0] = c;
            return t;
          },
          {}};
}

/// p(z) = sum_k coeffs[k] z^k.
inline ScalarBranch polynomial_branch(std::vector<cd> coeffs) {
  return {[coeffs](cd z, int m) {
            // Taylor shift by repeated synthetic division.
            std::vector<cd> a = coeffs;
            std::vector<cd> t(static_cast<std::size_t>(m + 1), 0.0);
            for (int k = 0; k <= m && !a.empty(); ++k) {
              cd r = 0.0;
              std::vector<cd> q(a.size() > 1 ? a.size() - 1 : 0);
              for (std::size_t i = a.size(); i-- > 0;) {
                r = r * z + a[i];
                if (i > 0) q[i - 1] = r;
              }
              t[static_cast<std::size_t>(k)] = r;
              a = std::move(q);
            }
            return t;
          },
          {}};
}

inline ScalarBranch identity_branch() { return polynomial_branch({0.0, 1.0}); }

/// Pointwise product, via the Cauchy product of Taylor coefficients.
inline ScalarBranch multiply(const ScalarBranch& f, const ScalarBranch& g) {
  auto domain = [f, g](cd z) { return (!f.domain || f.domain(z)) && (!g.domain || g.domain(z)); };
  return {[f, g](cd z, int m) {
            const auto a = f.taylor(z, m);
            const auto b = g.taylor(z, m);
            std::vector<cd> t(static_cast<std::size_t>(m + 1), 0.0);
            for (int k = 0; k <= m; ++k)
              for (int j = 0; j <= k; ++j)
                t[static_cast<std::size_t>(k)] += a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
            return t;
          },
          (f.domain || g.domain) ? std::function<bool(cd)>(domain) : std::function<bool(cd)>{}};
}

struct InterpolationOptions {
  /// Eigenvalues within merge_rel * spectral radius are one confluent node.
  double merge_rel = 1e-6;
  /// A merged node whose spread exceeds this multiple of the merge gap is
  /// neither coincident nor resolvable.
  double max_chain = 10.0;
};

/// Confluent Hermite node: a point with multiplicity.
struct HermiteNode {
  cd point;
  int multiplicity;
};

inline std::vector<HermiteNode> hermite_nodes(const Spectrum& s, const InterpolationOptions& opt = {}) {
  const double rho = s.spectral_radius();
  const double gap = opt.merge_rel * (rho > 0.0 ? rho : 1.0);
  std::vector<HermiteNode> nodes;
  for (const auto& c : s.cluster(gap)) {
    if (c.members.size() > 1 && c.spread > opt.max_chain * gap)
      throw IllConditionedInterpolation("eigenvalues neither coincide nor separate");
    nodes.push_back({c.center, static_cast<int>(c.members.size())});
  }
  return nodes;
}

/// Newton coefficients of the Hermite interpolant on the expanded node list.
inline std::vector<cd> hermite_newton_coefficients(const std::vector<HermiteNode>& nodes,
                                                   const ScalarBranch& f, std::vector<cd>& points) {
  points.clear();
  std::vector<std::vector<cd>> taylor;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    taylor.push_back(f.taylor(nodes[i].point, nodes[i].multiplicity - 1));
    for (int k = 0; k < nodes[i].multiplicity; ++k) {
      points.push_back(nodes[i].point);
      owner.push_back(i);
    }
  }
  const std::size_t m = points.size();
  // column-wise divided difference table: dd[i] holds f[z_i .. z_{i+j}]
  std::vector<cd> dd(m);
  for (std::size_t i = 0; i < m; ++i) dd[i] = taylor[owner[i]][0];
  std::vector<cd> coeffs{dd[0]};
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = 0; i + j < m; ++i) {
      if (owner[i] == owner[i + j]) {
        dd[i] = taylor[owner[i]][j];
      } else {
        dd[i] = (dd[i + 1] - dd[i]) / (points[i + j] - points[i]);
      }
    }
    coeffs.push_back(dd[0]);
  }
  return coeffs;
}

/// f(x) via Hermite interpolation on sigma(x).
inline CMatrix matrix_function(const CMatrix& x, const ScalarBranch& f,
                               const InterpolationOptions& opt = {}) {
  if (x.rows() != x.cols() || x.rows() == 0) throw DimensionError("matrix_function needs a square matrix");
  const Spectrum s = spectrum(x);
  if (f.domain)
    for (cd z : s.eigenvalues)
      if (!f.domain(z)) throw SpectrumOutsideDomain("eigenvalue outside the function's domain");
  const auto nodes = hermite_nodes(s, opt);
  std::vector<cd> points;
  const auto coeffs = hermite_newton_coefficients(nodes, f, points);
  const Eigen::Index n = x.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  // Horner on the Newton form
  CMatrix out = coeffs.back() * id;
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) out = out * (x - points[i] * id) + coeffs[i] * id;
  return out;
}

// ---------------------------------------------------------------------------
// Branch data

/// Centers, common radius, and a sign per center.
struct BranchSpec {
  std::vector<cd> gamma;
  double radius = 0.0;
  std::vector<int> tau;

  SimpleSet simple_set() const { return {gamma, radius}; }

  /// 0 outside every disc and quarter-isolation; tau entries are +-1.
  void validate() const {
    if (gamma.empty()) throw PreconditionError("branch spec needs at least one center");
    if (tau.size() != gamma.size()) throw PreconditionError("tau must have one sign per center");
    for (int t : tau)
      if (t != 1 && t != -1) throw PreconditionError("tau entries must be +1 or -1");
    const SimpleSet s = simple_set();
    if (!(radius > 0.0)) throw PreconditionError("branch radius must be positive");
    if (!s.excludes_zero()) throw PreconditionError("a branch disc contains 0");
    if (!s.is_t_isolated(0.25)) throw PreconditionError("branch discs are not quarter-isolated");
  }

  bool tau_constant() const {
    for (int t : tau)
      if (t != tau.front()) return false;
    return true;
  }
};

inline BranchSpec with_tau(BranchSpec spec, std::vector<int> tau) {
  spec.tau = std::move(tau);
  return spec;
}

/// All sign vectors in {-1,+1}^k, bit i of the index selecting -1 at center i.
inline std::vector<std::vector<int>> all_taus(std::size_t k) {
  std::vector<std::vector<int>> out;
  for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
    std::vector<int> t(k);
    for (std::size_t i = 0; i < k; ++i) t[i] = (mask >> i) & 1ul ? -1 : 1;
    out.push_back(std::move(t));
  }
  return out;
}

/// Principal square root of (1 + w) and its Taylor coefficients in w.
inline std::vector<cd> sqrt1p_taylor(cd w, int m) {
  const cd base = std::sqrt(1.0 + w);
  std::vector<cd> t(static_cast<std::size_t>(m + 1));
  // binom(1/2, k) (1 + w)^{1/2 - k}
  cd coef = 1.0;
  cd power = base;
  for (int k = 0; k <= m; ++k) {
    t[static_cast<std::size_t>(k)] = coef * power;
    coef *= (0.5 - k) / static_cast<double>(k + 1);
    power /= (1.0 + w);
  }
  return t;
}

/// The locally constant germ z -> tau(c) on the disc around c.
inline ScalarBranch involution_germ(const BranchSpec& spec) {
  spec.validate();
  const SimpleSet set = spec.simple_set();
  const auto tau = spec.tau;
  return {[set, tau](cd z, int m) {
            std::vector<cd> t(static_cast<std::size_t>(m + 1), 0.0);
            const auto i = set.disc_of(z);
            if (!i) throw SpectrumOutsideDomain("point outside the branch discs");
            t[0] = static_cast<double>(tau[*i]);
            return t;
          },
          [set](cd z) { return set.contains(z); }};
}

/// s_{gamma tau}: on the disc around c, tau(c) * sqrt(c) * sqrt(1 + (z - c)/c)
/// with principal square roots. Well defined since r < |c| keeps
/// 1 + (z - c)/c in the right half-plane.
inline ScalarBranch sqrt_germ(const BranchSpec& spec) {
  spec.validate();
  const SimpleSet set = spec.simple_set();
  const auto tau = spec.tau;
  return {[set, tau](cd z, int m) {
            const auto i = set.disc_of(z);
            if (!i) throw SpectrumOutsideDomain("point outside the branch discs");
            const cd c = set.centers[*i];
            auto t = sqrt1p_taylor((z - c) / c, m);
            const cd scale = static_cast<double>(tau[*i]) * std::sqrt(c);
            cd cpow = 1.0;
            for (auto& v : t) {
              v *= scale / cpow;
              cpow *= c;
            }
            return t;
          },
          [set](cd z) { return set.contains(z); }};
}

/// I_{gamma tau}(x): an involution in alg(x) commuting with x.
inline CMatrix involution_I(const CMatrix& x, const BranchSpec& spec, const InterpolationOptions& opt = {}) {
  return matrix_function(x, involution_germ(spec), opt);
}

/// S_{gamma tau}(x) = S_gamma(x) I_{gamma tau}(x): a square root of x in alg(x).
inline CMatrix sqrt_branch_S(const CMatrix& x, const BranchSpec& spec, const InterpolationOptions& opt = {}) {
  return matrix_function(x, sqrt_germ(spec), opt);
}

}  // namespace ncfree
