#pragma once

// Noncommutative rational expressions as immutable DAGs over named variables.
//
// Construction flattens nested sums and products and folds scalar arithmetic;
// nothing else is simplified, so generated expressions print the way they
// were built. Evaluation is memoized per node, which keeps the cost linear in
// the number of distinct nodes even when sub-expressions are heavily shared.

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/linalg.hpp"
#include "ncfree/words.hpp"

namespace ncfree {

/// Inverse children are rejected below this relative smallest singular value.
inline constexpr double kSingularityThreshold = 1e-10;

class RatExpr {
 public:
  enum class Kind { variable, scalar, sum, product, scalar_mul, inverse };

  struct Node {
    Kind kind;
    std::string name;               // variable
    cd value{0.0};                  // scalar, scalar_mul coefficient
    std::vector<RatExpr> children;  // sum, product (ordered), scalar_mul, inverse
  };

  RatExpr() : RatExpr(scalar(0.0)) {}

  static RatExpr var(std::string name) {
    return RatExpr(Node{Kind::variable, std::move(name), 0.0, {}});
  }

  static RatExpr scalar(cd value) { return RatExpr(Node{Kind::scalar, {}, value, {}}); }

  static RatExpr sum(const std::vector<RatExpr>& terms) {
    std::vector<RatExpr> flat;
    cd constant = 0.0;
    for (const auto& t : terms) {
      if (t.kind() == Kind::sum) {
        for (const auto& c : t.children()) {
          if (c.kind() == Kind::scalar) constant += c.value();
          else flat.push_back(c);
        }
      } else if (t.kind() == Kind::scalar) {
        constant += t.value();
      } else {
        flat.push_back(t);
      }
    }
    if (constant != cd{0.0}) flat.push_back(scalar(constant));
    if (flat.empty()) return scalar(0.0);
    if (flat.size() == 1) return flat.front();
    return RatExpr(Node{Kind::sum, {}, 0.0, std::move(flat)});
  }

  static RatExpr product(const std::vector<RatExpr>& factors) {
    std::vector<RatExpr> flat;
    cd coef = 1.0;
    auto push = [&](const RatExpr& f, auto&& self) -> void {
      switch (f.kind()) {
        case Kind::scalar: coef *= f.value(); break;
        case Kind::scalar_mul:
          coef *= f.value();
          self(f.children().front(), self);
          break;
        case Kind::product:
          for (const auto& c : f.children()) self(c, self);
          break;
        default: flat.push_back(f);
      }
    };
    for (const auto& f : factors) push(f, push);
    if (coef == cd{0.0}) return scalar(0.0);
    if (flat.empty()) return scalar(coef);
    RatExpr body = flat.size() == 1 ? flat.front()
                                    : RatExpr(Node{Kind::product, {}, 0.0, std::move(flat)});
    return scaled(coef, body);
  }

  static RatExpr scaled(cd coef, const RatExpr& e) {
    if (coef == cd{1.0}) return e;
    if (coef == cd{0.0}) return scalar(0.0);
    if (e.kind() == Kind::scalar) return scalar(coef * e.value());
    if (e.kind() == Kind::scalar_mul) return scaled(coef * e.value(), e.children().front());
    return RatExpr(Node{Kind::scalar_mul, {}, coef, {e}});
  }

  /// Inverse of a nonzero scalar folds; everything else becomes a node.
  static RatExpr inverse(const RatExpr& e) {
    if (e.kind() == Kind::scalar && e.value() != cd{0.0}) return scalar(1.0 / e.value());
    return RatExpr(Node{Kind::inverse, {}, 0.0, {e}});
  }

  friend RatExpr operator+(const RatExpr& a, const RatExpr& b) { return sum({a, b}); }
  friend RatExpr operator-(const RatExpr& a, const RatExpr& b) { return sum({a, scaled(-1.0, b)}); }
  friend RatExpr operator*(const RatExpr& a, const RatExpr& b) { return product({a, b}); }
  friend RatExpr operator*(cd s, const RatExpr& e) { return scaled(s, e); }
  RatExpr operator-() const { return scaled(-1.0, *this); }

  Kind kind() const noexcept { return node_->kind; }
  const std::string& name() const noexcept { return node_->name; }
  cd value() const noexcept { return node_->value; }
  const std::vector<RatExpr>& children() const noexcept { return node_->children; }
  const Node* id() const noexcept { return node_.get(); }

  bool is_zero() const { return kind() == Kind::scalar && value() == cd{0.0}; }

  std::set<std::string> free_variables() const {
    std::set<std::string> out;
    std::set<const Node*> seen;
    auto walk = [&](const RatExpr& e, auto&& self) -> void {
      if (!seen.insert(e.id()).second) return;
      if (e.kind() == Kind::variable) out.insert(e.name());
      for (const auto& c : e.children()) self(c, self);
    };
    walk(*this, walk);
    return out;
  }

  /// Number of distinct nodes in the DAG.
  std::size_t dag_size() const {
    std::set<const Node*> seen;
    auto walk = [&](const RatExpr& e, auto&& self) -> void {
      if (!seen.insert(e.id()).second) return;
      for (const auto& c : e.children()) self(c, self);
    };
    walk(*this, walk);
    return seen.size();
  }

  /// Structural equality (same tree shape, names and coefficients).
  friend bool same_structure(const RatExpr& a, const RatExpr& b) {
    if (a.id() == b.id()) return true;
    if (a.kind() != b.kind() || a.name() != b.name() || a.value() != b.value()) return false;
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
      if (!same_structure(a.children()[i], b.children()[i])) return false;
    return true;
  }

 private:
  explicit RatExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

inline RatExpr pow(const RatExpr& e, int k) {
  if (k < 0) return RatExpr::inverse(pow(e, -k));
  std::vector<RatExpr> f(static_cast<std::size_t>(k), e);
  return RatExpr::product(f);
}

// ---------------------------------------------------------------------------
// Text form: sums with " + ", products with "*", inverse as inv(...)

namespace detail {
inline std::string ratexpr_text(const RatExpr& e, int context);

// context: 0 = top/sum term, 1 = product factor, 2 = argument of ^
inline std::string ratexpr_text(const RatExpr& e, int context) {
  using K = RatExpr::Kind;
  switch (e.kind()) {
    case K::variable: return e.name();
    case K::scalar: {
      std::string s = format_complex(e.value());
      if (context >= 1 && s.front() == '-') return "(" + s + ")";
      return s;
    }
    case K::inverse: return "inv(" + ratexpr_text(e.children().front(), 0) + ")";
    case K::sum: {
      std::string s;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        const auto& c = e.children()[i];
        std::string t = ratexpr_text(c, 0);
        if (i == 0) {
          s = t;
        } else if (!t.empty() && t.front() == '-') {
          s += " - " + t.substr(1);
        } else {
          s += " + " + t;
        }
      }
      return context >= 1 ? "(" + s + ")" : s;
    }
    case K::product: {
      std::string s;
      const auto& ch = e.children();
      for (std::size_t i = 0; i < ch.size();) {
        std::size_t j = i;
        while (j < ch.size() && ch[j].kind() == K::variable && ch[i].kind() == K::variable &&
               ch[j].name() == ch[i].name())
          ++j;
        if (!s.empty()) s += "*";
        if (j - i > 1) {
          s += ch[i].name() + "^" + std::to_string(j - i);
          i = j;
        } else {
          s += ratexpr_text(ch[i], 1);
          ++i;
        }
      }
      return context >= 2 ? "(" + s + ")" : s;
    }
    case K::scalar_mul: {
      const cd c = e.value();
      const RatExpr& body = e.children().front();
      std::string prefix;
      if (c == cd{-1.0}) prefix = "-";
      else if (c.imag() == 0.0 && c.real() < 0.0) prefix = "-" + format_complex(-c) + "*";
      else prefix = format_complex(c) + "*";
      std::string s = prefix + ratexpr_text(body, 1);
      return context >= 1 ? "(" + s + ")" : s;
    }
  }
  return {};
}
}  // namespace detail

inline std::string to_text(const RatExpr& e) { return detail::ratexpr_text(e, 0); }

// ---------------------------------------------------------------------------
// Evaluation

using Assignment = std::map<std::string, CMatrix>;

namespace detail {
inline Eigen::Index assignment_level(const Assignment& a, Eigen::Index fallback) {
  Eigen::Index n = -1;
  for (const auto& [name, m] : a) {
    if (m.rows() != m.cols()) throw AssignmentError("assigned matrix '" + name + "' is not square");
    if (n < 0) n = m.rows();
    else if (m.rows() != n) throw AssignmentError("assigned matrices have different sizes");
  }
  if (n < 0) n = fallback;
  if (n < 1) throw AssignmentError("cannot infer evaluation level from an empty assignment");
  return n;
}
}  // namespace detail

/// Bottom-up evaluation. `level` is only consulted when the assignment is empty.
inline CMatrix eval(const RatExpr& e, const Assignment& assignment, Eigen::Index level = -1) {
  using K = RatExpr::Kind;
  const Eigen::Index n = detail::assignment_level(assignment, level);
  std::unordered_map<const RatExpr::Node*, CMatrix> memo;
  auto go = [&](const RatExpr& x, auto&& self) -> const CMatrix& {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    CMatrix out;
    switch (x.kind()) {
      case K::variable: {
        auto it = assignment.find(x.name());
        if (it == assignment.end()) throw AssignmentError("variable '" + x.name() + "' is not assigned");
        out = it->second;
        break;
      }
      case K::scalar: out = x.value() * CMatrix::Identity(n, n); break;
      case K::sum:
        out = CMatrix::Zero(n, n);
        for (const auto& c : x.children()) out += self(c, self);
        break;
      case K::product:
        out = self(x.children().front(), self);
        for (std::size_t i = 1; i < x.children().size(); ++i) out = out * self(x.children()[i], self);
        break;
      case K::scalar_mul: out = x.value() * self(x.children().front(), self); break;
      case K::inverse: {
        const CMatrix& c = self(x.children().front(), self);
        if (!in_I(c, kSingularityThreshold))
          throw SingularityError("singular inverse", to_text(x.children().front()));
        out = c.fullPivLu().inverse();
        break;
      }
    }
    return memo.emplace(x.id(), std::move(out)).first->second;
  };
  return go(e, go);
}

/// Simultaneous substitution of variables; shared sub-DAGs stay shared.
inline RatExpr substitute(const RatExpr& e, const std::map<std::string, RatExpr>& map) {
  using K = RatExpr::Kind;
  std::unordered_map<const RatExpr::Node*, RatExpr> memo;
  auto go = [&](const RatExpr& x, auto&& self) -> RatExpr {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    RatExpr out;
    switch (x.kind()) {
      case K::variable: {
        auto it = map.find(x.name());
        out = it == map.end() ? x : it->second;
        break;
      }
      case K::scalar: out = x; break;
      case K::sum:
      case K::product: {
        std::vector<RatExpr> ch;
        ch.reserve(x.children().size());
        for (const auto& c : x.children()) ch.push_back(self(c, self));
        out = x.kind() == K::sum ? RatExpr::sum(ch) : RatExpr::product(ch);
        break;
      }
      case K::scalar_mul: out = RatExpr::scaled(x.value(), self(x.children().front(), self)); break;
      case K::inverse: out = RatExpr::inverse(self(x.children().front(), self)); break;
    }
    memo.emplace(x.id(), out);
    return out;
  };
  return go(e, go);
}

// ---------------------------------------------------------------------------
// Probabilistic equivalence on random matrix samples

/// Complex Gaussian entries rescaled to unit operator norm.
template <class Rng>
CMatrix random_unit_matrix(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
  const double norm = op_norm(m);
  return norm > 0.0 ? CMatrix(m / norm) : m;
}

struct EquivalenceVerdict {
  bool equal_on_samples = true;
  double max_residual = 0.0;
  std::vector<std::pair<Eigen::Index, double>> per_level;  // (level, max residual)
  std::optional<Assignment> witness;                       // set when distinct
  double witness_residual = 0.0;
};

inline constexpr int kEquivalenceRetryCap = 50;

/// Samples independent random assignments at each level; never a proof of
/// equality, only a per-level verdict.
template <class Rng>
EquivalenceVerdict equivalent_probabilistic(const RatExpr& e1, const RatExpr& e2,
                                            const std::vector<Eigen::Index>& levels, int trials,
                                            double tol, Rng& rng) {
  std::set<std::string> names = e1.free_variables();
  for (const auto& v : e2.free_variables()) names.insert(v);
  EquivalenceVerdict verdict;
  for (Eigen::Index n : levels) {
    double level_max = 0.0;
    for (int t = 0; t < trials; ++t) {
      bool done = false;
      for (int attempt = 0; attempt < kEquivalenceRetryCap && !done; ++attempt) {
        Assignment a;
        for (const auto& name : names) a[name] = random_unit_matrix(n, rng);
        CMatrix v1, v2;
        try {
          v1 = eval(e1, a, n);
          v2 = eval(e2, a, n);
        } catch (const SingularityError&) {
          continue;
        }
        done = true;
        const double r = relative_residual(v1, v2);
        level_max = std::max(level_max, r);
        if (r > tol && verdict.equal_on_samples) {
          verdict.equal_on_samples = false;
          verdict.witness = a;
          verdict.witness_residual = r;
        }
      }
      if (!done)
        throw InconclusiveError("no admissible sample found within the retry cap at level " +
                                std::to_string(n));
    }
    verdict.per_level.emplace_back(n, level_max);
    verdict.max_residual = std::max(verdict.max_residual, level_max);
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Laurent expansion: canonical flattening for expressions whose inverses are
// all monomials. Adjacent a * a^{-1} pairs cancel, so two expressions that
// agree as elements of the free group algebra expand identically.

struct LaurentLetter {
  std::string name;
  bool inverse = false;
  auto operator<=>(const LaurentLetter&) const = default;
};

using LaurentWord = std::vector<LaurentLetter>;

class LaurentPoly {
 public:
  using Terms = std::map<LaurentWord, cd>;

  static LaurentPoly constant(cd c) {
    LaurentPoly p;
    p.add({}, c);
    return p;
  }

  static LaurentPoly letter(const std::string& name, bool inverse = false) {
    LaurentPoly p;
    p.add({{name, inverse}}, 1.0);
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add(LaurentWord w, cd c) {
    if (c == cd{0.0}) return;
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (it->second == cd{0.0}) terms_.erase(it);
    }
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    for (const auto& [w, c] : b.terms_) a.add(w, c);
    return a;
  }

  friend LaurentPoly operator*(cd s, const LaurentPoly& p) {
    LaurentPoly out;
    for (const auto& [w, c] : p.terms_) out.add(w, s * c);
    return out;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) out.add(reduce_concat(wa, wb), ca * cb);
    return out;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  /// Inverse exists in this representation only for a single monomial.
  std::optional<LaurentPoly> inverse() const {
    if (terms_.size() != 1) return std::nullopt;
    const auto& [w, c] = *terms_.begin();
    LaurentWord inv(w.rbegin(), w.rend());
    for (auto& l : inv) l.inverse = !l.inverse;
    LaurentPoly out;
    out.add(std::move(inv), 1.0 / c);
    return out;
  }

  /// Replaces each named letter by its image; inverse letters need a
  /// monomial image. Unmapped letters stay as they are.
  std::optional<LaurentPoly> substitute(const std::map<std::string, LaurentPoly>& images) const {
    LaurentPoly out;
    for (const auto& [w, c] : terms_) {
      LaurentPoly term = constant(c);
      for (const auto& l : w) {
        auto it = images.find(l.name);
        LaurentPoly img = it == images.end() ? letter(l.name) : it->second;
        if (l.inverse) {
          auto inv = img.inverse();
          if (!inv) return std::nullopt;
          img = *inv;
        }
        term = term * img;
      }
      out = out + term;
    }
    return out;
  }

  static LaurentWord reduce_concat(const LaurentWord& a, const LaurentWord& b) {
    LaurentWord out = a;
    for (const auto& l : b) {
      if (!out.empty() && out.back().name == l.name && out.back().inverse != l.inverse) {
        out.pop_back();
      } else {
        out.push_back(l);
      }
    }
    return out;
  }

 private:
  Terms terms_;
};

inline std::string word_text(const LaurentWord& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!s.empty()) s += "*";
    const std::size_t k = j - i;
    if (w[i].inverse) {
      s += "inv(" + w[i].name + ")";
      if (k > 1) s += "^" + std::to_string(k);
    } else {
      s += w[i].name;
      if (k > 1) s += "^" + std::to_string(k);
    }
    i = j;
  }
  return s;
}

/// Expands e into a Laurent polynomial; nullopt if some inverse has a
/// non-monomial argument.
inline std::optional<LaurentPoly> expand_laurent(const RatExpr& e) {
  using K = RatExpr::Kind;
  std::unordered_map<const RatExpr::Node*, std::optional<LaurentPoly>> memo;
  auto go = [&](const RatExpr& x, auto&& self) -> std::optional<LaurentPoly> {
    if (auto it = memo.find(x.id()); it != memo.end()) return it->second;
    std::optional<LaurentPoly> out;
    switch (x.kind()) {
      case K::variable: out = LaurentPoly::letter(x.name()); break;
      case K::scalar: out = LaurentPoly::constant(x.value()); break;
      case K::sum: {
        LaurentPoly acc;
        for (const auto& c : x.children()) {
          auto v = self(c, self);
          if (!v) return memo[x.id()] = std::nullopt;
          acc = acc + *v;
        }
        out = acc;
        break;
      }
      case K::product: {
        LaurentPoly acc = LaurentPoly::constant(1.0);
        for (const auto& c : x.children()) {
          auto v = self(c, self);
          if (!v) return memo[x.id()] = std::nullopt;
          acc = acc * *v;
        }
        out = acc;
        break;
      }
      case K::scalar_mul: {
        auto v = self(x.children().front(), self);
        if (v) out = x.value() * *v;
        break;
      }
      case K::inverse: {
        auto v = self(x.children().front(), self);
        if (v) out = v->inverse();
        break;
      }
    }
    return memo[x.id()] = out;
  };
  return go(e, go);
}

/// Converts a Laurent polynomial back to an expression (sum of monomials).
inline RatExpr to_ratexpr(const LaurentPoly& p) {
  std::vector<RatExpr> terms;
  for (const auto& [w, c] : p.terms()) {
    std::vector<RatExpr> f;
    for (const auto& l : w) {
      RatExpr v = RatExpr::var(l.name);
      f.push_back(l.inverse ? RatExpr::inverse(v) : v);
    }
    terms.push_back(RatExpr::scaled(c, RatExpr::product(f)));
  }
  return RatExpr::sum(terms);
}

}  // namespace ncfree
