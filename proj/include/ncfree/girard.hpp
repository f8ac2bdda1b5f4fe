#pragma once

// Noncommutative Newton-Girard expressions: P_n in (alpha, beta, gamma) with
//   x^n + y^n = P_n(u, v^2, v u v),  u = (x + y)/2,  v = (x - y)/2,
// for every integer n, plus the T-matrix route in (u, v) used to cross-check.
//
// Positive indices (Q_n stands for v q_n, q_n = x^n - y^n):
//   P_0 = 2, Q_0 = 0
//   P_{n+1} = alpha P_n + Q_n
//   Q_{n+1} = beta P_n + gamma beta^{-1} Q_n
// Negative indices (Q_{-n} stands for v q_{-n}):
//   P_{-(n+1)} = (alpha - beta gamma^{-1} beta)^{-1} P_{-n}
//              + (beta - gamma beta^{-1} alpha)^{-1} Q_{-n}
//   Q_{-(n+1)} = beta (beta - alpha beta^{-1} gamma)^{-1} P_{-n}
//              + beta (gamma - beta alpha^{-1} beta)^{-1} Q_{-n}

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "ncfree/domains.hpp"
#include "ncfree/errors.hpp"
#include "ncfree/ratexpr.hpp"
#include "ncfree/report.hpp"
#include "ncfree/symbasis.hpp"
#include "ncfree/words.hpp"

namespace ncfree {

struct GirardPair {
  int n = 0;
  RatExpr P;
  RatExpr Q;
};

inline GirardPair girard_positive(int n) {
  if (n < 0) throw PreconditionError("girard_positive needs n >= 0");
  const RatExpr alpha = RatExpr::var(kAlpha);
  const RatExpr beta = RatExpr::var(kBeta);
  const RatExpr gamma = RatExpr::var(kGamma);
  const RatExpr gamma_beta_inv = gamma * RatExpr::inverse(beta);
  RatExpr p = RatExpr::scalar(2.0);
  RatExpr q = RatExpr::scalar(0.0);
  for (int k = 0; k < n; ++k) {
    RatExpr next_p = alpha * p + q;
    RatExpr next_q = beta * p + gamma_beta_inv * q;
    p = std::move(next_p);
    q = std::move(next_q);
  }
  return {n, p, q};
}

/// The four sub-expressions whose inverses the negative recursion takes.
struct NegativeDomainExprs {
  RatExpr a;  // alpha - beta gamma^{-1} beta
  RatExpr b;  // beta - gamma beta^{-1} alpha
  RatExpr c;  // beta - alpha beta^{-1} gamma
  RatExpr d;  // gamma - beta alpha^{-1} beta
};

inline NegativeDomainExprs negative_domain_exprs() {
  const RatExpr alpha = RatExpr::var(kAlpha);
  const RatExpr beta = RatExpr::var(kBeta);
  const RatExpr gamma = RatExpr::var(kGamma);
  const RatExpr ai = RatExpr::inverse(alpha);
  const RatExpr bi = RatExpr::inverse(beta);
  const RatExpr gi = RatExpr::inverse(gamma);
  return {alpha - beta * gi * beta, beta - gamma * bi * alpha, beta - alpha * bi * gamma,
          gamma - beta * ai * beta};
}

/// Returns the pair for index -n.
inline GirardPair girard_negative(int n) {
  if (n < 1) throw PreconditionError("girard_negative needs n >= 1");
  const RatExpr beta = RatExpr::var(kBeta);
  const auto dom = negative_domain_exprs();
  const RatExpr ia = RatExpr::inverse(dom.a);
  const RatExpr ib = RatExpr::inverse(dom.b);
  const RatExpr bic = beta * RatExpr::inverse(dom.c);
  const RatExpr bid = beta * RatExpr::inverse(dom.d);
  RatExpr p = RatExpr::scalar(2.0);
  RatExpr q = RatExpr::scalar(0.0);
  for (int k = 0; k < n; ++k) {
    RatExpr next_p = ia * p + ib * q;
    RatExpr next_q = bic * p + bid * q;
    p = std::move(next_p);
    q = std::move(next_q);
  }
  return {-n, p, q};
}

inline GirardPair girard(int n) { return n >= 0 ? girard_positive(n) : girard_negative(-n); }

/// Purely polynomial form 2 s_even(n) in (u, v), n >= 0.
inline FreePoly girard_polynomial_form(int n) { return cd{2.0} * s_even(n); }

/// (p_n, q_n) in the variables u, v from powers of T = [[u, v], [v, u]].
/// n >= 0: 2 s_even(n), 2 s_odd(n). n < 0: 2 f_|n|, 2 g_|n| with
/// f_1 = (u - v u^{-1} v)^{-1}, g_1 = (v - u v^{-1} u)^{-1} and
/// T^{-(k+1)} = T^{-1} T^{-k}.
inline std::pair<RatExpr, RatExpr> girard_via_T(int n) {
  const RatExpr u = RatExpr::var("u");
  const RatExpr v = RatExpr::var("v");
  auto from_poly = [&](const FreePoly& p) {
    std::vector<RatExpr> terms;
    for (const auto& [w, c] : p.terms()) {
      std::vector<RatExpr> f;
      for (int l : w) f.push_back(l == 1 ? u : v);
      terms.push_back(RatExpr::scaled(c, RatExpr::product(f)));
    }
    return RatExpr::sum(terms);
  };
  if (n >= 0) return {from_poly(cd{2.0} * s_even(n)), from_poly(cd{2.0} * s_odd(n))};
  const RatExpr f1 = RatExpr::inverse(u - v * RatExpr::inverse(u) * v);
  const RatExpr g1 = RatExpr::inverse(v - u * RatExpr::inverse(v) * u);
  RatExpr f = f1, g = g1;
  for (int k = 1; k < -n; ++k) {
    RatExpr nf = f1 * f + g1 * g;
    RatExpr ng = g1 * f + f1 * g;
    f = std::move(nf);
    g = std::move(ng);
  }
  return {cd{2.0} * f, cd{2.0} * g};
}

inline Assignment pi_assignment(const PiValue& p) {
  return {{kAlpha, p.alpha}, {kBeta, p.beta}, {kGamma, p.gamma}};
}

/// x^n + y^n with negative n meaning inverse powers.
inline CMatrix power_sum(const MatrixTuple& w, int n) {
  require_pair(w);
  const Eigen::Index dim = w.n();
  auto power = [&](const CMatrix& x) {
    CMatrix base = n >= 0 ? x : checked_inverse(x);
    CMatrix out = CMatrix::Identity(dim, dim);
    for (int k = 0; k < std::abs(n); ++k) out = out * base;
    return out;
  };
  return power(w[0]) + power(w[1]);
}

/// Smallest relative singular value among alpha, beta, gamma and the four
/// negative-domain expressions at pi(w).
inline double negative_domain_margin(const PiValue& p) {
  const Assignment a = pi_assignment(p);
  double m = 1.0;
  auto rel = [](const CMatrix& x) {
    const Eigen::VectorXd s = singular_values(x);
    return s(0) == 0.0 ? 0.0 : s(s.size() - 1) / s(0);
  };
  m = std::min({rel(p.alpha), rel(p.beta), rel(p.gamma)});
  if (m <= kSingularityThreshold) return m;
  const auto dom = negative_domain_exprs();
  for (const RatExpr* e : {&dom.a, &dom.b, &dom.c, &dom.d}) m = std::min(m, rel(eval(*e, a)));
  return m;
}

/// Relative residual of x^n + y^n against P_n(pi(w)); passes iff <= tol.
inline Report verify_girard(int n, const MatrixTuple& w, double tol) {
  const PiValue p = pi(w);
  const GirardPair g = girard(n);
  Report r;
  r.tolerances["girard"] = tol;
  CMatrix lhs, rhs;
  try {
    lhs = power_sum(w, n);
    rhs = eval(g.P, pi_assignment(p));
  } catch (const SingularityError& e) {
    throw DomainError(std::string("sample outside the domain of P_n: ") + e.what());
  } catch (const PreconditionError& e) {
    throw DomainError(std::string("sample outside the domain of p_n: ") + e.what());
  }
  const double res = op_norm(lhs - rhs) / (1.0 + op_norm(lhs));
  r.add("girard_n=" + std::to_string(n) + "_level=" + std::to_string(w.n()), res <= tol, res);
  return r;
}

// ---------------------------------------------------------------------------
// Display

/// Expansion of a Laurent word in alpha, beta, gamma back to u, v, v^{-1}
/// (alpha = u, beta = v v, gamma = v u v), used as a display order key.
inline LaurentWord uv_expansion(const LaurentWord& w) {
  LaurentWord out;
  const LaurentLetter u{"u", false}, v{"v", false};
  for (const auto& l : w) {
    LaurentWord piece;
    if (l.name == kAlpha) piece = {u};
    else if (l.name == kBeta) piece = {v, v};
    else if (l.name == kGamma) piece = {v, u, v};
    else piece = {l};
    if (l.inverse) {
      std::reverse(piece.begin(), piece.end());
      for (auto& p : piece) p.inverse = !p.inverse;
    }
    out = LaurentPoly::reduce_concat(out, piece);
  }
  return out;
}

/// Text for a Laurent polynomial in alpha, beta, gamma: terms ordered by
/// their (u, v) expansion (degree, then lexicographic with u < v), and a
/// common coefficient factored out, e.g. "2*(alpha^3 + alpha*beta + gamma + beta*alpha)".
inline std::string girard_text(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<LaurentWord, cd>> terms(p.terms().begin(), p.terms().end());
  auto key = [](const LaurentWord& w) {
    const LaurentWord e = uv_expansion(w);
    std::vector<int> k;
    for (const auto& l : e) k.push_back(l.name == "u" ? 0 : (l.inverse ? 2 : 1));
    return k;
  };
  std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
    const auto ka = key(a.first), kb = key(b.first);
    if (ka.size() != kb.size()) return ka.size() < kb.size();
    return ka < kb;
  });
  const cd common = terms.front().second;
  bool uniform = true;
  for (const auto& [w, c] : terms) uniform = uniform && c == common;
  auto mono = [](const LaurentWord& w) { return w.empty() ? std::string("1") : word_text(w); };
  std::string body;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& [w, c] = terms[i];
    std::string t;
    if (uniform) {
      t = mono(w);
    } else if (w.empty()) {
      t = format_complex(c);
    } else if (c == cd{1.0}) {
      t = mono(w);
    } else {
      t = format_complex(c) + "*" + mono(w);
    }
    if (i > 0) {
      if (t.front() == '-') body += " - " + t.substr(1);
      else body += " + " + t;
    } else {
      body = t;
    }
  }
  if (!uniform || common == cd{1.0}) return body;
  if (terms.size() == 1) {
    if (terms.front().first.empty()) return format_complex(common);
    return format_complex(common) + "*" + body;
  }
  return format_complex(common) + "*(" + body + ")";
}

/// P_n as text: the expanded polynomial form for n >= 0, the structural
/// recursion output for n < 0.
inline std::string girard_text(int n) {
  const GirardPair g = girard(n);
  if (n >= 0) {
    if (auto lp = expand_laurent(g.P)) return girard_text(*lp);
  }
  return to_text(g.P);
}

}  // namespace ncfree
