#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prufer {

// Syntax error in a coefficient expression; position() is a 0-based byte
// offset into the source string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Domain violation while evaluating (log of a nonpositive value, division by
// zero, overflow, ...).  Carries the evaluation point and the offending
// subexpression so the failure is reportable without a debugger.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& msg, double x, std::string subexpr);
  double x() const { return x_; }
  const std::string& subexpr() const { return subexpr_; }

 private:
  double x_;
  std::string subexpr_;
};

enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Ln, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

// Immutable arithmetic expression in one variable `x`.
//
// Grammar (whitespace ignored, no implicit multiplication):
//   expression := term  (('+'|'-') term)*
//   term       := unary (('*'|'/') unary)*
//   unary      := ('-'|'+') unary | power
//   power      := primary ('^' unary)?          -- right-associative
//   primary    := number | 'x' | name '(' expression ')' | '(' expression ')'
//   name       := sin | cos | tan | exp | ln | sqrt | abs
//
// '^' binds tighter than unary minus, so "-x^2" is -(x^2).
class Expr {
 public:
  Expr() = default;

  static Expr parse(std::string_view source);  // throws ParseError

  // Programmatic constructors (used by generators in tests and by
  // CoefficientFn::constant).
  static Expr number(double v);
  static Expr variable();
  static Expr unary(UnaryOp op, const Expr& operand);
  static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);

  bool empty() const { return root_ == nullptr; }
  double eval(double x) const;  // throws EvalError on domain violations
  std::string to_string() const;  // re-parseable, fully parenthesized

  struct Node;  // defined in expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace prufer
