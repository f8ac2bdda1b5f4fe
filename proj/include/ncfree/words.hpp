#pragma once

// Free words and free polynomials over d noncommuting letters.
//
// Letters are 1-based. Polynomials carry a chart tag so that the (x, y) and
// (u, v) coordinates of the two-variable case cannot be confused: to_uv only
// accepts the xy chart and from_uv only the uv chart.

#include <algorithm>
#include <charconv>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/linalg.hpp"

namespace ncfree {

using Word = std::vector<int>;

/// Degree-lexicographic order used for canonical display.
struct DegLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

enum class Chart { plain, xy, uv };

inline const char* chart_name(Chart c) {
  switch (c) {
    case Chart::xy: return "xy";
    case Chart::uv: return "uv";
    default: return "plain";
  }
}

/// Shortest round-trip text for a double; integers print without a fraction.
inline std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Text for a complex coefficient in the expression grammar.
inline std::string format_complex(cd c) {
  if (c.imag() == 0.0) return format_real(c.real());
  if (c.real() == 0.0) {
    if (c.imag() == 1.0) return "i";
    if (c.imag() == -1.0) return "-i";
    return format_real(c.imag()) + "i";
  }
  std::string im = format_real(std::abs(c.imag()));
  if (im == "1") im.clear();
  return "(" + format_real(c.real()) + (c.imag() < 0 ? "-" : "+") + im + "i)";
}

class FreePoly {
 public:
  using Terms = std::map<Word, cd, DegLex>;

  explicit FreePoly(int d = 2, Chart chart = Chart::plain) : d_(d), chart_(chart) {
    if (d < 1) throw DimensionError("free polynomial needs d >= 1");
    if (chart != Chart::plain && d != 2) throw DimensionError("xy/uv charts require d = 2");
  }

  static FreePoly constant(int d, cd c, Chart chart = Chart::plain) {
    return monomial(d, {}, c, chart);
  }

  static FreePoly letter(int d, int i, Chart chart = Chart::plain) {
    return monomial(d, {i}, 1.0, chart);
  }

  static FreePoly monomial(int d, Word w, cd c, Chart chart = Chart::plain) {
    FreePoly p(d, chart);
    p.add_term(std::move(w), c);
    return p;
  }

  int d() const noexcept { return d_; }
  Chart chart() const noexcept { return chart_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Max word length; -1 for the zero polynomial.
  int degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(terms_.rbegin()->first.size());
  }

  cd coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? cd{0.0} : it->second;
  }

  /// Adds c * w, dropping the entry if the coefficient becomes exactly zero.
  void add_term(Word w, cd c) {
    for (int letter : w)
      if (letter < 1 || letter > d_) throw DimensionError("letter index out of range");
    if (c == cd{0.0}) return;
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (it->second == cd{0.0}) terms_.erase(it);
    }
  }

  FreePoly with_chart(Chart c) const {
    FreePoly out(d_, c);
    out.terms_ = terms_;
    return out;
  }

  FreePoly& operator+=(const FreePoly& o) {
    adopt_chart(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }

  FreePoly& operator-=(const FreePoly& o) {
    adopt_chart(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }

  friend FreePoly operator+(FreePoly a, const FreePoly& b) { return a += b; }
  friend FreePoly operator-(FreePoly a, const FreePoly& b) { return a -= b; }

  friend FreePoly operator*(const FreePoly& a, const FreePoly& b) {
    FreePoly out(a.d_, a.chart_);
    out.adopt_chart(b);
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) {
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        out.add_term(std::move(w), ca * cb);
      }
    return out;
  }

  friend FreePoly operator*(cd s, const FreePoly& p) {
    FreePoly out(p.d_, p.chart_);
    for (const auto& [w, c] : p.terms_) out.add_term(w, s * c);
    return out;
  }

  FreePoly operator-() const { return cd{-1.0} * *this; }

  FreePoly pow(int k) const {
    if (k < 0) throw PreconditionError("negative power of a free polynomial");
    FreePoly out = constant(d_, 1.0, chart_);
    for (int i = 0; i < k; ++i) out = out * *this;
    return out;
  }

  /// Coefficient-map equality; charts must agree unless one side is plain.
  friend bool operator==(const FreePoly& a, const FreePoly& b) {
    if (a.d_ != b.d_) return false;
    if (a.chart_ != b.chart_ && a.chart_ != Chart::plain && b.chart_ != Chart::plain) return false;
    return a.terms_ == b.terms_;
  }

  /// Homogeneous component of the given degree.
  FreePoly homogeneous(int degree) const {
    FreePoly out(d_, chart_);
    for (const auto& [w, c] : terms_)
      if (static_cast<int>(w.size()) == degree) out.terms_.emplace(w, c);
    return out;
  }

  /// Drops coefficients with modulus at most tol * (largest modulus).
  FreePoly pruned(double tol) const {
    double m = 0.0;
    for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c));
    FreePoly out(d_, chart_);
    for (const auto& [w, c] : terms_)
      if (std::abs(c) > tol * m) out.terms_.emplace(w, c);
    return out;
  }

  std::string letter_name(int i) const {
    if (chart_ == Chart::xy) return i == 1 ? "x" : "y";
    if (chart_ == Chart::uv) return i == 1 ? "u" : "v";
    return "x" + std::to_string(i);
  }

 private:
  void adopt_chart(const FreePoly& o) {
    if (o.d_ != d_) throw DimensionError("free polynomials with different d");
    if (chart_ == Chart::plain) {
      chart_ = o.chart_;
    } else if (o.chart_ != Chart::plain && o.chart_ != chart_) {
      throw PreconditionError("free polynomials in different charts");
    }
  }

  int d_;
  Chart chart_;
  Terms terms_;
};

/// Text form in the expression grammar, e.g. "2*x^2 + x*y - y*x".
inline std::string to_text(const FreePoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    std::string mono;
    for (std::size_t i = 0; i < w.size();) {
      std::size_t j = i;
      while (j < w.size() && w[j] == w[i]) ++j;
      if (!mono.empty()) mono += "*";
      mono += p.letter_name(w[i]);
      if (j - i > 1) mono += "^" + std::to_string(j - i);
      i = j;
    }
    cd coef = c;
    const bool negative = coef.imag() == 0.0 && coef.real() < 0.0;
    if (negative) coef = -coef;
    if (!first) out += negative ? " - " : " + ";
    else if (negative) out += "-";
    first = false;
    if (mono.empty()) {
      out += format_complex(coef);
    } else if (coef == cd{1.0}) {
      out += mono;
    } else {
      out += format_complex(coef) + "*" + mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

/// Sum over terms of coefficient times the ordered product of components.
inline CMatrix evaluate(const FreePoly& p, const MatrixTuple& x) {
  if (static_cast<std::size_t>(p.d()) != x.d())
    throw DimensionError("polynomial d does not match tuple d");
  const Eigen::Index n = x.n();
  CMatrix out = CMatrix::Zero(n, n);
  // Terms are in deglex order, so consecutive words often share prefixes;
  // keep the running product of the previous word's prefix.
  std::vector<CMatrix> prefix{CMatrix::Identity(n, n)};
  Word last;
  for (const auto& [w, c] : p.terms()) {
    std::size_t common = 0;
    while (common < w.size() && common < last.size() && w[common] == last[common]) ++common;
    prefix.resize(common + 1);
    for (std::size_t i = common; i < w.size(); ++i)
      prefix.push_back(prefix.back() * x[static_cast<std::size_t>(w[i] - 1)]);
    out += c * prefix.back();
    last = w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitution, flip, symmetrization

/// Replaces letter i by images[i-1] and expands. The result takes the chart
/// of the images.
inline FreePoly substitute(const FreePoly& p, const std::vector<FreePoly>& images) {
  if (images.size() != static_cast<std::size_t>(p.d()))
    throw DimensionError("substitution needs one image per letter");
  const int d = images.front().d();
  const Chart chart = images.front().chart();
  FreePoly out(d, chart);
  std::map<Word, FreePoly> cache;
  cache.emplace(Word{}, FreePoly::constant(d, 1.0, chart));
  for (const auto& [w, c] : p.terms()) {
    Word prefix;
    const FreePoly* cur = &cache.at(prefix);
    for (int letter : w) {
      prefix.push_back(letter);
      auto it = cache.find(prefix);
      if (it == cache.end())
        it = cache.emplace(prefix, *cur * images[static_cast<std::size_t>(letter - 1)]).first;
      cur = &it->second;
    }
    out += c * *cur;
  }
  return out;
}

/// Swaps letters 1 and 2 (w -> w^f).
inline FreePoly flip(const FreePoly& p) {
  if (p.d() != 2) throw DimensionError("flip requires d = 2");
  FreePoly out(2, p.chart());
  for (const auto& [w, c] : p.terms()) {
    Word f = w;
    for (int& l : f) l = 3 - l;
    out.add_term(std::move(f), c);
  }
  return out;
}

inline FreePoly symmetrize(const FreePoly& p) {
  return cd{0.5} * (p + flip(p));
}

inline bool is_symmetric(const FreePoly& p) {
  return p == flip(p);
}

/// x -> u + v, y -> u - v.
inline FreePoly to_uv(const FreePoly& p) {
  if (p.d() != 2) throw DimensionError("to_uv requires d = 2");
  if (p.chart() == Chart::uv) throw PreconditionError("polynomial is already in the uv chart");
  const FreePoly u = FreePoly::letter(2, 1, Chart::uv);
  const FreePoly v = FreePoly::letter(2, 2, Chart::uv);
  return substitute(p, {u + v, u - v});
}

/// u -> (x + y)/2, v -> (x - y)/2.
inline FreePoly from_uv(const FreePoly& p) {
  if (p.d() != 2) throw DimensionError("from_uv requires d = 2");
  if (p.chart() == Chart::xy) throw PreconditionError("polynomial is already in the xy chart");
  const FreePoly x = FreePoly::letter(2, 1, Chart::xy);
  const FreePoly y = FreePoly::letter(2, 2, Chart::xy);
  return substitute(p, {cd{0.5} * (x + y), cd{0.5} * (x - y)});
}

inline int count_letter(const Word& w, int letter) {
  return static_cast<int>(std::count(w.begin(), w.end(), letter));
}

/// Splits a uv polynomial into the parts with even and odd count of v.
inline std::pair<FreePoly, FreePoly> v_parity_split(const FreePoly& p) {
  if (p.d() != 2) throw DimensionError("v_parity_split requires d = 2");
  if (p.chart() == Chart::xy) throw PreconditionError("v_parity_split expects the uv chart");
  FreePoly even(2, p.chart()), odd(2, p.chart());
  for (const auto& [w, c] : p.terms()) (count_letter(w, 2) % 2 == 0 ? even : odd).add_term(w, c);
  return {even, odd};
}

namespace detail {
inline FreePoly s_parity(int n, int parity) {
  if (n < 0) throw PreconditionError("s_even/s_odd need n >= 0");
  FreePoly out(2, Chart::uv);
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    Word w(static_cast<std::size_t>(n));
    int vs = 0;
    // most significant bit first, so the enumeration is lexicographic
    for (int i = 0; i < n; ++i) {
      const bool is_v = (mask >> (n - 1 - i)) & 1ul;
      w[static_cast<std::size_t>(i)] = is_v ? 2 : 1;
      vs += is_v;
    }
    if (vs % 2 == parity) out.add_term(std::move(w), 1.0);
  }
  return out;
}
}  // namespace detail

/// Sum of all degree-n monomials in u, v with an even number of v's.
inline FreePoly s_even(int n) { return detail::s_parity(n, 0); }

/// Sum of all degree-n monomials in u, v with an odd number of v's.
inline FreePoly s_odd(int n) { return detail::s_parity(n, 1); }

// ---------------------------------------------------------------------------
// Basic free sets B_delta = { x : ||[delta_ij(x)]|| < 1 }

using PolyMatrix = std::vector<std::vector<FreePoly>>;

/// Block matrix [delta_ij(x)] of size (I*n) x (J*n).
inline CMatrix eval_delta(const PolyMatrix& delta, const MatrixTuple& x) {
  if (delta.empty() || delta.front().empty()) throw DimensionError("empty delta matrix");
  const Eigen::Index n = x.n();
  const auto rows = static_cast<Eigen::Index>(delta.size());
  const auto cols = static_cast<Eigen::Index>(delta.front().size());
  CMatrix out(rows * n, cols * n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = delta[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols) throw DimensionError("ragged delta matrix");
    for (Eigen::Index j = 0; j < cols; ++j)
      out.block(i * n, j * n, n, n) = evaluate(row[static_cast<std::size_t>(j)], x);
  }
  return out;
}

inline bool in_B_delta(const PolyMatrix& delta, const MatrixTuple& x) {
  return op_norm(eval_delta(delta, x)) < 1.0;
}

}  // namespace ncfree
