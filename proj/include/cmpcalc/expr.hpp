#pragma once

// Comparison formulas over ring generators.
//
//   expr   := term (('+'|'^') term)*
//   term   := factor ('*' factor)*
//   factor := '~' factor | IDENT | '0' | '1' | '(' expr ')'
//
// '+' is the symmetric difference, '*' the intersection and '~x' the
// complement 1+x. Same-kind children are flattened into n-ary nodes.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmpcalc/error.hpp"
#include "cmpcalc/ring.hpp"

namespace cmpcalc {

class Expression {
 public:
  enum class Kind { Zero, One, Var, Xor, And };

  static Expression zero() { return Expression(Kind::Zero); }
  static Expression one() { return Expression(Kind::One); }
  static Expression var(std::string name) {
    Expression e(Kind::Var);
    e.name_ = std::move(name);
    return e;
  }
  static Expression xor_of(std::vector<Expression> children) { return nary(Kind::Xor, std::move(children)); }
  static Expression and_of(std::vector<Expression> children) { return nary(Kind::And, std::move(children)); }
  static Expression complement_of(Expression x) { return xor_of({one(), std::move(x)}); }

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  std::span<const Expression> children() const noexcept { return children_; }

  friend bool operator==(const Expression& a, const Expression& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.children_ == b.children_;
  }

 private:
  explicit Expression(Kind kind) : kind_(kind) {}

  static Expression nary(Kind kind, std::vector<Expression> children) {
    if (children.empty()) throw InputError("n-ary node needs at least one child");
    if (children.size() == 1) return std::move(children.front());
    Expression e(kind);
    for (auto& child : children) {
      if (child.kind_ == kind) {
        for (auto& grandchild : child.children_) e.children_.push_back(std::move(grandchild));
      } else {
        e.children_.push_back(std::move(child));
      }
    }
    return e;
  }

  Kind kind_;
  std::string name_;
  std::vector<Expression> children_;
};

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const RingContext* ctx) : text_(text), ctx_(ctx) {}

  Expression parse() {
    Expression e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  Expression parse_expr() {
    std::vector<Expression> terms;
    terms.push_back(parse_term());
    while (accept('+') || accept('^')) terms.push_back(parse_term());
    return Expression::xor_of(std::move(terms));
  }

  Expression parse_term() {
    std::vector<Expression> factors;
    factors.push_back(parse_factor());
    while (accept('*')) factors.push_back(parse_factor());
    return Expression::and_of(std::move(factors));
  }

  Expression parse_factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return Expression::complement_of(parse_factor());
    }
    if (c == '(') {
      ++pos_;
      Expression inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const auto token = text_.substr(start, pos_ - start);
      if (token == "0") return Expression::zero();
      if (token == "1") return Expression::one();
      pos_ = start;
      fail("only the constants 0 and 1 are allowed, got '" + std::string(token) + "'");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (ctx_ != nullptr && !ctx_->index_of(name)) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      return Expression::var(std::move(name));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const RingContext* ctx_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses without checking identifiers against a ring.
inline Expression parse(std::string_view text) { return detail::ExpressionParser(text, nullptr).parse(); }

// Parses and requires every identifier to be a generator of `ctx`.
inline Expression parse(std::string_view text, const RingContext& ctx) {
  return detail::ExpressionParser(text, &ctx).parse();
}

inline std::string to_string(const Expression& e) {
  switch (e.kind()) {
    case Expression::Kind::Zero:
      return "0";
    case Expression::Kind::One:
      return "1";
    case Expression::Kind::Var:
      return e.name();
    case Expression::Kind::Xor: {
      std::string out;
      for (const auto& child : e.children()) {
        if (!out.empty()) out += '+';
        out += child.kind() == Expression::Kind::Xor ? "(" + to_string(child) + ")" : to_string(child);
      }
      return out;
    }
    case Expression::Kind::And: {
      std::string out;
      for (const auto& child : e.children()) {
        if (!out.empty()) out += '*';
        const bool wrap = child.kind() == Expression::Kind::Xor || child.kind() == Expression::Kind::And;
        out += wrap ? "(" + to_string(child) + ")" : to_string(child);
      }
      return out;
    }
  }
  return {};
}

// Number of binary comparisons: an n-ary node costs n-1.
inline std::size_t cost(const Expression& e) {
  if (e.children().empty()) return 0;
  std::size_t total = e.children().size() - 1;
  for (const auto& child : e.children()) total += cost(child);
  return total;
}

inline void collect_variables(const Expression& e, std::set<std::string>& out) {
  if (e.kind() == Expression::Kind::Var) out.insert(e.name());
  for (const auto& child : e.children()) collect_variables(child, out);
}

using Bindings = std::map<std::string, RingElement, std::less<>>;

// Variables resolve to `bindings` first, then to the generator of that name.
inline RingElement eval(const Expression& e, const ContextPtr& ctx, const Bindings& bindings = {}) {
  switch (e.kind()) {
    case Expression::Kind::Zero:
      return RingElement::zero(ctx);
    case Expression::Kind::One:
      return RingElement::unity(ctx);
    case Expression::Kind::Var: {
      if (auto it = bindings.find(e.name()); it != bindings.end()) {
        if (it->second.context() != ctx) {
          throw InputError("binding for '" + e.name() + "' belongs to a different ring");
        }
        return it->second;
      }
      if (ctx->index_of(e.name())) return generator(ctx, e.name());
      throw InputError("unbound variable '" + e.name() + "'");
    }
    case Expression::Kind::Xor: {
      RingElement acc = RingElement::zero(ctx);
      for (const auto& child : e.children()) acc = xor_add(acc, eval(child, ctx, bindings));
      return acc;
    }
    case Expression::Kind::And: {
      RingElement acc = RingElement::unity(ctx);
      for (const auto& child : e.children()) acc = and_mul(acc, eval(child, ctx, bindings));
      return acc;
    }
  }
  throw InputError("corrupt expression node");
}

// A product of distinct variables, sorted by name; empty means the constant 1.
using Monomial = std::vector<std::string>;

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

// XOR-of-AND normal form with A*A = A and A+A = 0 applied.
class CanonicalPolynomial {
 public:
  using Terms = std::set<Monomial, MonomialLess>;

  CanonicalPolynomial() = default;

  static CanonicalPolynomial constant_one() {
    CanonicalPolynomial p;
    p.terms_.insert(Monomial{});
    return p;
  }

  static CanonicalPolynomial variable(const std::string& name) {
    CanonicalPolynomial p;
    p.terms_.insert(Monomial{name});
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void toggle(const Monomial& m) {
    if (auto it = terms_.find(m); it != terms_.end()) {
      terms_.erase(it);
    } else {
      terms_.insert(m);
    }
  }

  friend CanonicalPolynomial operator+(const CanonicalPolynomial& a, const CanonicalPolynomial& b) {
    CanonicalPolynomial out = a;
    for (const auto& m : b.terms_) out.toggle(m);
    return out;
  }

  friend CanonicalPolynomial operator*(const CanonicalPolynomial& a, const CanonicalPolynomial& b) {
    CanonicalPolynomial out;
    for (const auto& x : a.terms_) {
      for (const auto& y : b.terms_) {
        Monomial product;
        std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(product));
        out.toggle(product);
      }
    }
    return out;
  }

  friend bool operator==(const CanonicalPolynomial& a, const CanonicalPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  // Monomials by degree then name order, e.g. "1+b+a*c".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& m : terms_) {
      if (!out.empty()) out += '+';
      if (m.empty()) {
        out += '1';
        continue;
      }
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += '*';
        out += m[i];
      }
    }
    return out;
  }

  Expression to_expression() const {
    if (terms_.empty()) return Expression::zero();
    std::vector<Expression> sum;
    for (const auto& m : terms_) {
      if (m.empty()) {
        sum.push_back(Expression::one());
        continue;
      }
      std::vector<Expression> product;
      for (const auto& v : m) product.push_back(Expression::var(v));
      sum.push_back(Expression::and_of(std::move(product)));
    }
    return Expression::xor_of(std::move(sum));
  }

 private:
  Terms terms_;
};

inline CanonicalPolynomial expand(const Expression& e) {
  switch (e.kind()) {
    case Expression::Kind::Zero:
      return {};
    case Expression::Kind::One:
      return CanonicalPolynomial::constant_one();
    case Expression::Kind::Var:
      return CanonicalPolynomial::variable(e.name());
    case Expression::Kind::Xor: {
      CanonicalPolynomial acc;
      for (const auto& child : e.children()) acc = acc + expand(child);
      return acc;
    }
    case Expression::Kind::And: {
      CanonicalPolynomial acc = CanonicalPolynomial::constant_one();
      for (const auto& child : e.children()) acc = acc * expand(child);
      return acc;
    }
  }
  return {};
}

inline bool equivalent(const Expression& a, const Expression& b) { return expand(a) == expand(b); }

// Polynomial in the generator names whose value is x. Never has a constant
// term: unity is the XOR of all generator products.
inline CanonicalPolynomial to_polynomial(const RingElement& x) {
  const auto& names = x.context()->generator_names();
  CanonicalPolynomial p;
  for (auto t : x.monomials()) {
    Monomial m;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (t & (std::uint32_t{1} << k)) m.push_back(names[k]);
    }
    std::sort(m.begin(), m.end());
    p.toggle(m);
  }
  return p;
}

inline std::string format_element(const RingElement& x) { return to_polynomial(x).to_string(); }

}  // namespace cmpcalc
