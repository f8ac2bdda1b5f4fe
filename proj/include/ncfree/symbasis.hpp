#pragma once

// Symmetric free polynomials in two variables rewritten over the generators
// U = u and M_j = v u^j v, and reduced to rational expressions in
// alpha = u, beta = v^2, gamma = v u v.

#include <map>
#include <string>
#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/ratexpr.hpp"
#include "ncfree/words.hpp"

namespace ncfree {

/// A generator word: -1 stands for U, j >= 0 for M_j.
using GenWord = std::vector<int>;
inline constexpr int kGenU = -1;

/// Weighted degree: U has weight 1, M_j has weight j + 2.
inline int weighted_degree(const GenWord& w) {
  int d = 0;
  for (int g : w) d += g == kGenU ? 1 : g + 2;
  return d;
}

struct GenOrder {
  bool operator()(const GenWord& a, const GenWord& b) const {
    const int da = weighted_degree(a), db = weighted_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

class GenPoly {
 public:
  using Terms = std::map<GenWord, cd, GenOrder>;

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add(GenWord w, cd c) {
    for (int g : w)
      if (g < kGenU) throw PreconditionError("invalid generator index");
    if (c == cd{0.0}) return;
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (it->second == cd{0.0}) terms_.erase(it);
    }
  }

  friend bool operator==(const GenPoly& a, const GenPoly& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

inline std::string generator_name(int g) { return g == kGenU ? "U" : "M" + std::to_string(g); }

/// Text form with tokens U and M0, M1, ...
inline std::string to_text(const GenPoly& g) {
  if (g.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : g.terms()) {
    std::string mono;
    for (std::size_t i = 0; i < w.size();) {
      std::size_t j = i;
      while (j < w.size() && w[j] == w[i]) ++j;
      if (!mono.empty()) mono += "*";
      mono += generator_name(w[i]);
      if (j - i > 1) mono += "^" + std::to_string(j - i);
      i = j;
    }
    cd coef = c;
    const bool negative = coef.imag() == 0.0 && coef.real() < 0.0;
    if (negative) coef = -coef;
    if (!first) out += negative ? " - " : " + ";
    else if (negative) out += "-";
    first = false;
    if (mono.empty()) out += format_complex(coef);
    else if (coef == cd{1.0}) out += mono;
    else out += format_complex(coef) + "*" + mono;
  }
  return out;
}

/// Factors a uv-word with an even number of v's into U and M_j blocks by a
/// left-to-right scan: u emits U, a v opens a block that the next v closes.
inline GenWord factor_even_word(const Word& w) {
  GenWord out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 1) {
      out.push_back(kGenU);
      continue;
    }
    std::size_t j = i + 1;
    while (j < w.size() && w[j] == 1) ++j;
    if (j == w.size()) throw NotSymmetric("word has an odd number of v letters");
    out.push_back(static_cast<int>(j - i - 1));
    i = j;
  }
  return out;
}

/// Rewrites a symmetric p (xy chart) over the generators U, M_j.
inline GenPoly decompose_symmetric(const FreePoly& p) {
  if (p.d() != 2) throw DimensionError("decompose_symmetric requires d = 2");
  // In the uv chart the flip is v -> -v, which the odd-part test below covers.
  if (p.chart() != Chart::uv && !is_symmetric(p)) throw NotSymmetric("polynomial is not symmetric under x <-> y");
  const FreePoly uv = p.chart() == Chart::uv ? p : to_uv(p);
  auto [even, odd] = v_parity_split(uv);
  // Exact symmetry of p means the odd part is zero up to rounding in the
  // substitution; anything larger is a genuine asymmetry.
  double scale = 0.0;
  for (const auto& [w, c] : even.terms()) scale = std::max(scale, std::abs(c));
  for (const auto& [w, c] : odd.terms())
    if (std::abs(c) > 1e-12 * std::max(scale, 1.0)) throw NotSymmetric("uv form has a nonzero odd part");
  GenPoly g;
  for (const auto& [w, c] : even.terms()) g.add(factor_even_word(w), c);
  return g;
}

/// Substitutes U -> u and M_j -> v u^j v and expands (uv chart).
inline FreePoly expand_back(const GenPoly& g) {
  FreePoly out(2, Chart::uv);
  for (const auto& [w, c] : g.terms()) {
    Word word;
    for (int gen : w) {
      if (gen == kGenU) {
        word.push_back(1);
      } else {
        word.push_back(2);
        word.insert(word.end(), static_cast<std::size_t>(gen), 1);
        word.push_back(2);
      }
    }
    out.add_term(std::move(word), c);
  }
  return out;
}

inline const std::string kAlpha = "alpha";
inline const std::string kBeta = "beta";
inline const std::string kGamma = "gamma";

/// U -> alpha, M_0 -> beta, M_j -> gamma (beta^{-1} gamma)^{j-1} for j >= 1.
inline RatExpr reduce_to_pi(const GenPoly& g) {
  const RatExpr alpha = RatExpr::var(kAlpha);
  const RatExpr beta = RatExpr::var(kBeta);
  const RatExpr gamma = RatExpr::var(kGamma);
  const RatExpr beta_inv = RatExpr::inverse(beta);
  std::vector<RatExpr> terms;
  for (const auto& [w, c] : g.terms()) {
    std::vector<RatExpr> f;
    for (int gen : w) {
      if (gen == kGenU) {
        f.push_back(alpha);
      } else if (gen == 0) {
        f.push_back(beta);
      } else {
        f.push_back(gamma);
        for (int k = 1; k < gen; ++k) {
          f.push_back(beta_inv);
          f.push_back(gamma);
        }
      }
    }
    terms.push_back(RatExpr::scaled(c, RatExpr::product(f)));
  }
  return RatExpr::sum(terms);
}

/// F with p = F o pi wherever beta = v^2 is invertible.
inline RatExpr factor_through_pi(const FreePoly& p) { return reduce_to_pi(decompose_symmetric(p)); }

// ---------------------------------------------------------------------------
// Dimension bookkeeping for homogeneous symmetric polynomials

/// The orbit sums w + w^f over words of length d with first letter x: a
/// basis of the homogeneous symmetric polynomials of degree d.
inline std::vector<FreePoly> symmetric_orbit_basis(int d) {
  std::vector<FreePoly> out;
  if (d < 1) return out;
  for (unsigned long mask = 0; mask < (1ul << (d - 1)); ++mask) {
    Word w{1};
    for (int i = 0; i < d - 1; ++i) w.push_back((mask >> (d - 2 - i)) & 1ul ? 2 : 1);
    FreePoly m = FreePoly::monomial(2, w, 1.0, Chart::xy);
    out.push_back(m + flip(m));
  }
  return out;
}

/// All generator words of weighted degree d.
inline std::vector<GenWord> generator_words(int d) {
  std::vector<GenWord> out;
  GenWord cur;
  auto rec = [&](int remaining, auto&& self) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    cur.push_back(kGenU);
    self(remaining - 1, self);
    cur.pop_back();
    for (int j = 0; j + 2 <= remaining; ++j) {
      cur.push_back(j);
      self(remaining - j - 2, self);
      cur.pop_back();
    }
  };
  rec(d, rec);
  return out;
}

}  // namespace ncfree
