#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "slicefn/reciprocal.hpp"

namespace slicefn {

/// Names of the canonical basis: 1, i, j, k, l, li, lj, lk.
inline int unit_index(std::string_view name) {
  static constexpr std::string_view names[] = {"1", "i", "j", "k", "l", "li", "lj", "lk"};
  for (int t = 0; t < 8; ++t)
    if (names[t] == name) return t;
  return -1;
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Number, Unit, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Conj, Normal, Recip };

struct Expr {
  ExprKind kind;
  std::string text;
  int exponent = 0;
  ExprPtr lhs;
  ExprPtr rhs;

  friend bool operator==(const Expr& a, const Expr& b) {
    auto same = [](const ExprPtr& p, const ExprPtr& q) { return (!p && !q) || (p && q && *p == *q); };
    return a.kind == b.kind && a.text == b.text && a.exponent == b.exponent && same(a.lhs, b.lhs) &&
           same(a.rhs, b.rhs);
  }
};

inline bool contains_variable(const Expr& e) {
  if (e.kind == ExprKind::Variable) return true;
  return (e.lhs && contains_variable(*e.lhs)) || (e.rhs && contains_variable(*e.rhs));
}

inline bool contains_unit(const Expr& e) {
  if (e.kind == ExprKind::Unit) return true;
  return (e.lhs && contains_unit(*e.lhs)) || (e.rhs && contains_unit(*e.rhs));
}

/// Fully parenthesized text; parsing it gives back the same tree.
inline std::string serialize(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Number:
    case ExprKind::Unit: return e.text;
    case ExprKind::Variable: return "x";
    case ExprKind::Negate: return "(-" + serialize(*e.lhs) + ")";
    case ExprKind::Add: return "(" + serialize(*e.lhs) + "+" + serialize(*e.rhs) + ")";
    case ExprKind::Subtract: return "(" + serialize(*e.lhs) + "-" + serialize(*e.rhs) + ")";
    case ExprKind::Multiply: return "(" + serialize(*e.lhs) + "*" + serialize(*e.rhs) + ")";
    case ExprKind::Divide: return "(" + serialize(*e.lhs) + "/" + serialize(*e.rhs) + ")";
    case ExprKind::Power: return "(" + serialize(*e.lhs) + "^" + std::to_string(e.exponent) + ")";
    case ExprKind::Conj: return "conj(" + serialize(*e.lhs) + ")";
    case ExprKind::Normal: return "N(" + serialize(*e.lhs) + ")";
    case ExprKind::Recip: return "recip(" + serialize(*e.lhs) + ")";
  }
  return {};
}

class ExpressionParser {
 public:
  ExpressionParser(std::string text, AlgebraId algebra) : text_(std::move(text)), algebra_(algebra) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::ParseError) const {
    throw ParseFailure(code, pos_, msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static ExprPtr node(ExprKind kind, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
    return std::make_shared<Expr>(Expr{kind, {}, 0, std::move(lhs), std::move(rhs)});
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      if (accept('+'))
        e = node(ExprKind::Add, e, term());
      else if (accept('-'))
        e = node(ExprKind::Subtract, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    const std::size_t start = pos_;
    ExprPtr first = unary();
    int nonreal = is_nonreal_constant(*first) ? 1 : 0;
    ExprPtr e = first;
    while (true) {
      ExprKind kind;
      if (accept('*'))
        kind = ExprKind::Multiply;
      else if (accept('/'))
        kind = ExprKind::Divide;
      else
        break;
      ExprPtr rhs = unary();
      if (kind == ExprKind::Multiply && is_nonreal_constant(*rhs)) ++nonreal;
      e = node(kind, e, rhs);
    }
    if (algebra_.level == 3 && nonreal >= 3) {
      pos_ = start;
      fail("unparenthesized product of three or more octonion constants", ErrorCode::AmbiguousConstantProduct);
    }
    return e;
  }

  static bool is_nonreal_constant(const Expr& e) { return !contains_variable(e) && contains_unit(e); }

  ExprPtr unary() {
    if (accept('-')) return node(ExprKind::Negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (!accept('^')) return base;
    skip();
    bool negative = accept('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    auto e = std::make_shared<Expr>(Expr{ExprKind::Power, {}, 0, base, nullptr});
    e->exponent = std::stoi(text_.substr(start, pos_ - start)) * (negative ? -1 : 1);
    return e;
  }

  ExprPtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      std::string num = text_.substr(start, pos_ - start);
      if (std::count(num.begin(), num.end(), '.') > 1 || num == ".") {
        pos_ = start;
        fail("malformed number");
      }
      return std::make_shared<Expr>(Expr{ExprKind::Number, num, 0, nullptr, nullptr});
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string word = text_.substr(start, pos_ - start);
      if (word == "x") return node(ExprKind::Variable);
      if (word == "conj" || word == "N" || word == "recip") {
        if (!accept('(')) fail("expected '(' after " + word);
        ExprPtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        const ExprKind kind = word == "conj" ? ExprKind::Conj : word == "N" ? ExprKind::Normal : ExprKind::Recip;
        return node(kind, arg);
      }
      const int idx = unit_index(word);
      if (idx < 0) {
        pos_ = start;
        fail("unknown name '" + word + "'");
      }
      if (idx >= algebra_.dim()) {
        pos_ = start;
        fail("unit '" + word + "' is not in " + std::string(1, algebra_.symbol()));
      }
      return std::make_shared<Expr>(Expr{ExprKind::Unit, word, 0, nullptr, nullptr});
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  AlgebraId algebra_;
  std::size_t pos_ = 0;
};

inline ExprPtr parse_expression(const std::string& text, AlgebraId algebra) {
  return ExpressionParser(text, algebra).parse();
}

template <Scalar S>
S parse_scalar(const std::string& text) {
  if constexpr (ScalarTraits<S>::exact)
    return parse_rational(text);
  else
    return std::stod(text);
}

namespace detail {

template <Scalar S>
std::optional<Element<S>> constant_value(const SliceFunction<S>& f) {
  if (auto p = f.template as<StarPolynomial<S>>()) {
    if (p->degree() <= 0) return p->coeff(0);
  }
  return std::nullopt;
}

}  // namespace detail

/// Star-product semantics: * is the slice product, ^n the star power.
template <Scalar S>
SliceFunction<S> evaluate_expression(const Expr& e, AlgebraId algebra) {
  switch (e.kind) {
    case ExprKind::Number:
      return constant_function(Element<S>::real(algebra, parse_scalar<S>(e.text)));
    case ExprKind::Unit:
      return constant_function(Element<S>::basis(algebra, unit_index(e.text)));
    case ExprKind::Variable:
      return variable_function<S>(algebra);
    case ExprKind::Negate:
      return slice_negate(evaluate_expression<S>(*e.lhs, algebra));
    case ExprKind::Add:
      return slice_sum(evaluate_expression<S>(*e.lhs, algebra), evaluate_expression<S>(*e.rhs, algebra));
    case ExprKind::Subtract:
      return slice_sum(evaluate_expression<S>(*e.lhs, algebra),
                       slice_negate(evaluate_expression<S>(*e.rhs, algebra)));
    case ExprKind::Multiply:
      return slice_product(evaluate_expression<S>(*e.lhs, algebra), evaluate_expression<S>(*e.rhs, algebra));
    case ExprKind::Divide: {
      auto c = detail::constant_value(evaluate_expression<S>(*e.rhs, algebra));
      if (!c || !is_real(*c) || c->is_zero()) {
        throw SliceError(ErrorCode::InvalidArgument, "division is only by a nonzero real constant");
      }
      return slice_product(evaluate_expression<S>(*e.lhs, algebra),
                           constant_function(Element<S>::real(algebra, S(S(1) / (*c)[0]))));
    }
    case ExprKind::Power: {
      SliceFunction<S> base = evaluate_expression<S>(*e.lhs, algebra);
      if (e.exponent < 0) base = star_reciprocal(base);
      SliceFunction<S> out = constant_function(Element<S>::real(algebra, S(1)));
      for (int m = 0; m < std::abs(e.exponent); ++m) out = slice_product(out, base);
      return out;
    }
    case ExprKind::Conj:
      return slice_conjugate(evaluate_expression<S>(*e.lhs, algebra));
    case ExprKind::Normal:
      return normal(evaluate_expression<S>(*e.lhs, algebra));
    case ExprKind::Recip:
      return star_reciprocal(evaluate_expression<S>(*e.lhs, algebra));
  }
  throw SliceError(ErrorCode::InvalidArgument, "unknown expression node");
}

template <Scalar S>
SliceFunction<S> parse_function(const std::string& text, AlgebraId algebra) {
  return evaluate_expression<S>(*parse_expression(text, algebra), algebra);
}

/// A point of the algebra written as a constant expression.
template <Scalar S>
Element<S> parse_point(const std::string& text, AlgebraId algebra) {
  auto e = parse_expression(text, algebra);
  if (contains_variable(*e)) throw ParseFailure(ErrorCode::ParseError, 0, "a point cannot contain x");
  auto c = detail::constant_value(evaluate_expression<S>(*e, algebra));
  if (!c) throw ParseFailure(ErrorCode::ParseError, 0, "point expression is not constant");
  return *c;
}

}  // namespace slicefn
