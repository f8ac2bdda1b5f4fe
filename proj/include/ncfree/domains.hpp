#pragma once

// Free-domain predicates and the symmetrization maps:
//   pi(w)      = (u, v^2, v u v)           u = (w1 + w2)/2, v = (w1 - w2)/2
//   phi(u, x)  = (u, x, S u S)             S = S_{gamma tau}(x)
//   omega(u,x) = (u + S, u - S)
// together with brute-force fibers of pi.

#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/funcalc.hpp"
#include "ncfree/linalg.hpp"
#include "ncfree/simple_set.hpp"
#include "ncfree/sqrtlib.hpp"
#include "ncfree/words.hpp"

namespace ncfree {

struct PiValue {
  CMatrix alpha, beta, gamma;
};

inline void require_pair(const MatrixTuple& w) {
  if (w.d() != 2) throw DimensionError("expected a pair of matrices (d = 2)");
}

inline CMatrix u_part(const MatrixTuple& w) { return 0.5 * (w[0] + w[1]); }
inline CMatrix v_part(const MatrixTuple& w) { return 0.5 * (w[0] - w[1]); }

inline MatrixTuple flip(const MatrixTuple& w) {
  require_pair(w);
  return MatrixTuple({w[1], w[0]});
}

inline PiValue pi(const MatrixTuple& w) {
  require_pair(w);
  const CMatrix u = u_part(w);
  const CMatrix v = v_part(w);
  return {u, v * v, v * u * v};
}

inline double pi_distance(const PiValue& a, const PiValue& b) {
  return std::max({op_norm(a.alpha - b.alpha), op_norm(a.beta - b.beta), op_norm(a.gamma - b.gamma)});
}

/// w in S_o iff v = (w1 - w2)/2 lies in Q.
inline bool in_S_o(const MatrixTuple& w, double tol = kDefaultTol) {
  require_pair(w);
  return in_Q(v_part(w), tol);
}

/// sigma(x) inside the simple set (discs shrunk by the containment margin).
inline bool in_D_gamma(const CMatrix& x, const SimpleSet& delta) {
  for (cd z : spectrum(x).eigenvalues)
    if (!delta.contains(z)) return false;
  return true;
}

/// W_gamma places no condition on u.
inline bool in_W_gamma(const CMatrix& /*u*/, const CMatrix& x, const SimpleSet& delta) {
  return in_D_gamma(x, delta);
}

/// ||u I - I u|| for I = I_{gamma tau}(x).
inline double variety_residual_V(const CMatrix& u, const CMatrix& x, const BranchSpec& spec) {
  const CMatrix inv = involution_I(x, spec);
  return op_norm(u * inv - inv * u);
}

/// (u, x) in U_gamma: u commutes with no I_{gamma tau}(x) for nonconstant tau.
inline bool in_U_gamma(const CMatrix& u, const CMatrix& x, const SimpleSet& delta, double tol = 1e-8) {
  if (!in_D_gamma(x, delta)) return false;
  const double unorm = op_norm(u);
  BranchSpec spec{delta.centers, delta.radius, {}};
  for (const auto& tau : all_taus(delta.centers.size())) {
    spec.tau = tau;
    if (spec.tau_constant()) continue;
    if (variety_residual_V(u, x, spec) <= tol * unorm) return false;
  }
  return true;
}

struct PhiValue {
  CMatrix u, x, sus;
};

inline PhiValue phi(const CMatrix& u, const CMatrix& x, const BranchSpec& spec) {
  if (!in_D_gamma(x, spec.simple_set())) throw SpectrumOutsideDomain("sigma(x) is not inside Delta_gamma");
  const CMatrix s = sqrt_branch_S(x, spec);
  return {u, x, s * u * s};
}

inline MatrixTuple omega(const CMatrix& u, const CMatrix& x, const BranchSpec& spec) {
  if (!in_D_gamma(x, spec.simple_set())) throw SpectrumOutsideDomain("sigma(x) is not inside Delta_gamma");
  const CMatrix s = sqrt_branch_S(x, spec);
  return MatrixTuple({u + s, u - s});
}

/// (w1 + w2)/2 and ((w1 - w2)/2)^2.
inline std::pair<CMatrix, CMatrix> omega_inverse(const MatrixTuple& w) {
  require_pair(w);
  const CMatrix v = v_part(w);
  return {u_part(w), v * v};
}

struct FiberOptions {
  double tol = 1e-8;
  SqrtOptions sqrt{};
};

/// All w' with pi(w') = pi(w), by brute force over the branch square roots
/// of v^2. Requires v invertible with sigma(v) and sigma(-v) disjoint so
/// that v itself lies in alg(v^2).
inline std::vector<MatrixTuple> fiber(const MatrixTuple& w, const FiberOptions& opt = {}) {
  require_pair(w);
  const CMatrix u = u_part(w);
  const CMatrix v = v_part(w);
  if (!in_I(v, opt.sqrt.tol)) throw Unsupported("fiber: v = (w1 - w2)/2 is not invertible");
  if (!in_Q(v, opt.sqrt.tol)) throw Unsupported("fiber: sigma(v) meets sigma(-v)");
  const CMatrix vuv = v * u * v;
  const RootSet candidates = all_square_roots(v * v, opt.sqrt);
  const double scale = 1.0 + op_norm(vuv);
  std::vector<MatrixTuple> out;
  for (const auto& vp : candidates.roots)
    if (op_norm(vp * u * vp - vuv) <= opt.tol * scale) out.push_back(MatrixTuple({u + vp, u - vp}));
  return out;
}

/// The free closure of { p = 0 } for a one-variable p is { x : p(x) singular }.
inline bool in_free_closure_of_variety(const FreePoly& p, const CMatrix& x, double tol = kDefaultTol) {
  if (p.d() != 1) throw DimensionError("in_free_closure_of_variety expects a one-variable polynomial");
  return !in_I(evaluate(p, MatrixTuple({x})), tol);
}

}  // namespace ncfree
