#pragma once

// Expression grammar (whitespace-insensitive):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary | paren-factor)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number ['i'] | 'i' | ident | 'inv' '(' expr ')' | '(' expr ')'
//
// Identifiers: x, y (xy chart), u, v (uv chart), alpha, beta, gamma, U, M0, M1, ...
// The result is a FreePoly unless `inv`, a negative power, or one of the
// non-polynomial identifiers occurs, in which case it is a RatExpr.

#include <cctype>
#include <charconv>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/ratexpr.hpp"
#include "ncfree/words.hpp"

namespace ncfree {

struct ExprAst {
  enum class Kind { number, identifier, add, sub, mul, neg, pow, inv };
  Kind kind;
  std::size_t position = 0;
  cd value{0.0};
  std::string name;
  int exponent = 0;
  std::vector<std::shared_ptr<const ExprAst>> children;
};

using AstPtr = std::shared_ptr<const ExprAst>;

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  AstPtr parse() {
    skip();
    if (pos_ == s_.size()) throw ParseError("empty expression", pos_);
    AstPtr e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  static AstPtr node(ExprAst::Kind k, std::size_t pos, std::vector<AstPtr> ch = {}) {
    auto n = std::make_shared<ExprAst>();
    n->kind = k;
    n->position = pos;
    n->children = std::move(ch);
    return n;
  }

  AstPtr expr() {
    AstPtr lhs = term();
    while (true) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        const std::size_t at = pos_;
        const bool plus = s_[pos_++] == '+';
        lhs = node(plus ? ExprAst::Kind::add : ExprAst::Kind::sub, at, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  AstPtr term() {
    AstPtr lhs = unary();
    while (true) {
      skip();
      const std::size_t at = pos_;
      if (peek('*')) {
        ++pos_;
        lhs = node(ExprAst::Kind::mul, at, {lhs, unary()});
      } else if (peek('(')) {
        lhs = node(ExprAst::Kind::mul, at, {lhs, power()});
      } else {
        return lhs;
      }
    }
  }

  AstPtr unary() {
    skip();
    const std::size_t at = pos_;
    if (peek('-')) {
      ++pos_;
      return node(ExprAst::Kind::neg, at, {unary()});
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  AstPtr power() {
    AstPtr base = primary();
    if (!peek('^')) return base;
    const std::size_t at = pos_++;
    skip();
    bool negative = false;
    if (peek('-')) {
      negative = true;
      ++pos_;
      skip();
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("exponent must be an integer", start);
    if (pos_ < s_.size() && (s_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(s_[pos_]))))
      throw ParseError("exponent must be an integer", start);
    int k = 0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (res.ec != std::errc{}) throw ParseError("exponent out of range", start);
    auto n = std::make_shared<ExprAst>();
    n->kind = ExprAst::Kind::pow;
    n->position = at;
    n->exponent = negative ? -k : k;
    n->children = {base};
    return n;
  }

  AstPtr primary() {
    skip();
    if (pos_ == s_.size()) throw ParseError("unexpected end of expression", pos_);
    const std::size_t at = pos_;
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      AstPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(at, pos_ - at));
      if (name == "inv") {
        expect('(');
        AstPtr e = expr();
        expect(')');
        return node(ExprAst::Kind::inv, at, {e});
      }
      if (name == "i") {
        auto n = std::make_shared<ExprAst>();
        n->kind = ExprAst::Kind::number;
        n->position = at;
        n->value = cd{0.0, 1.0};
        return n;
      }
      if (!known_identifier(name)) throw ParseError("unknown identifier '" + name + "'", at);
      auto n = std::make_shared<ExprAst>();
      n->kind = ExprAst::Kind::identifier;
      n->position = at;
      n->name = std::move(name);
      return n;
    }
    throw ParseError(std::string("unexpected '") + c + "'", at);
  }

  AstPtr number() {
    const std::size_t at = pos_;
    double v = 0.0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc{}) throw ParseError("malformed number", at);
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    auto n = std::make_shared<ExprAst>();
    n->kind = ExprAst::Kind::number;
    n->position = at;
    n->value = cd{v, 0.0};
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 == s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '_'))) {
      ++pos_;
      n->value = cd{0.0, v};
    }
    return n;
  }

  static bool known_identifier(const std::string& n) {
    if (n == "x" || n == "y" || n == "u" || n == "v" || n == "alpha" || n == "beta" || n == "gamma" || n == "U")
      return true;
    if (n.size() >= 2 && n[0] == 'M') {
      for (std::size_t i = 1; i < n.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(n[i]))) return false;
      return true;
    }
    return false;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

struct AstInfo {
  bool xy = false, uv = false, rational = false;
  std::size_t xy_pos = 0, uv_pos = 0;
};

inline void scan(const ExprAst& a, AstInfo& info) {
  using K = ExprAst::Kind;
  if (a.kind == K::identifier) {
    if (a.name == "x" || a.name == "y") {
      if (!info.xy) info.xy_pos = a.position;
      info.xy = true;
    } else if (a.name == "u" || a.name == "v") {
      if (!info.uv) info.uv_pos = a.position;
      info.uv = true;
    } else {
      info.rational = true;
    }
  }
  if (a.kind == K::inv || (a.kind == K::pow && a.exponent < 0)) info.rational = true;
  for (const auto& c : a.children) scan(*c, info);
}

inline FreePoly build_poly(const ExprAst& a, Chart chart) {
  using K = ExprAst::Kind;
  switch (a.kind) {
    case K::number: return FreePoly::constant(2, a.value, chart);
    case K::identifier: {
      const int letter = (a.name == "x" || a.name == "u") ? 1 : 2;
      return FreePoly::letter(2, letter, chart);
    }
    case K::add: return build_poly(*a.children[0], chart) + build_poly(*a.children[1], chart);
    case K::sub: return build_poly(*a.children[0], chart) - build_poly(*a.children[1], chart);
    case K::mul: return build_poly(*a.children[0], chart) * build_poly(*a.children[1], chart);
    case K::neg: return cd{-1.0} * build_poly(*a.children[0], chart);
    case K::pow: return build_poly(*a.children[0], chart).pow(a.exponent);
    case K::inv: break;
  }
  throw ParseError("inverse in a polynomial context", a.position);
}

inline RatExpr build_rat(const ExprAst& a) {
  using K = ExprAst::Kind;
  switch (a.kind) {
    case K::number: return RatExpr::scalar(a.value);
    case K::identifier: return RatExpr::var(a.name);
    case K::add: return build_rat(*a.children[0]) + build_rat(*a.children[1]);
    case K::sub: return build_rat(*a.children[0]) - build_rat(*a.children[1]);
    case K::mul: return build_rat(*a.children[0]) * build_rat(*a.children[1]);
    case K::neg: return -build_rat(*a.children[0]);
    case K::pow: return pow(build_rat(*a.children[0]), a.exponent);
    case K::inv: return RatExpr::inverse(build_rat(*a.children[0]));
  }
  return {};
}

}  // namespace detail

inline AstPtr parse_ast(std::string_view text) { return detail::Parser(text).parse(); }

/// A parsed expression: a free polynomial (d = 2, xy or uv chart, plain if
/// letter-free) or a rational expression.
using ParsedExpr = std::variant<FreePoly, RatExpr>;

inline ParsedExpr parse_expression(std::string_view text) {
  const AstPtr ast = parse_ast(text);
  detail::AstInfo info;
  detail::scan(*ast, info);
  if (info.xy && info.uv)
    throw MixedChartError("x/y and u/v letters in one expression", std::max(info.xy_pos, info.uv_pos));
  if (info.rational) return detail::build_rat(*ast);
  const Chart chart = info.xy ? Chart::xy : (info.uv ? Chart::uv : Chart::plain);
  return detail::build_poly(*ast, chart);
}

/// Parses text that must denote a free polynomial.
inline FreePoly parse_polynomial(std::string_view text) {
  ParsedExpr e = parse_expression(text);
  if (auto* p = std::get_if<FreePoly>(&e)) return *p;
  throw ParseError("expected a polynomial expression", 0);
}

/// Converts a two-letter free polynomial to an expression over its letter names.
inline RatExpr to_ratexpr(const FreePoly& p) {
  std::vector<RatExpr> terms;
  for (const auto& [w, c] : p.terms()) {
    std::vector<RatExpr> f;
    for (int l : w) f.push_back(RatExpr::var(p.letter_name(l)));
    terms.push_back(RatExpr::scaled(c, RatExpr::product(f)));
  }
  return RatExpr::sum(terms);
}

/// Parses text as a rational expression, promoting polynomials.
inline RatExpr parse_ratexpr(std::string_view text) {
  ParsedExpr e = parse_expression(text);
  if (auto* p = std::get_if<FreePoly>(&e)) return to_ratexpr(*p);
  return std::get<RatExpr>(e);
}

inline std::string to_text(const ParsedExpr& e) {
  return std::visit([](const auto& v) { return to_text(v); }, e);
}

}  // namespace ncfree
