#include "prufer/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace prufer {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ParseError::ParseError(const std::string& msg, std::size_t position)
    : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
      position_(position) {}

EvalError::EvalError(const std::string& msg, double x, std::string subexpr)
    : std::runtime_error(msg + " in '" + subexpr + "' at x=" + format_double(x)),
      x_(x),
      subexpr_(std::move(subexpr)) {}

struct Expr::Node {
  enum class Kind { Number, Variable, Unary, Binary };
  Kind kind = Kind::Number;
  double value = 0.0;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;

void print_node(const Node& n, std::string& out);

std::string node_string(const Node& n) {
  std::string out;
  print_node(n, out);
  return out;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Ln: return "ln";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Abs: return "abs";
  }
  return "?";
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Number:
      // Negative literals get parentheses so "(-1)^x" cannot reparse as
      // -(1^x).
      if (std::signbit(n.value)) {
        out += '(';
        out += format_double(n.value);
        out += ')';
      } else {
        out += format_double(n.value);
      }
      break;
    case Node::Kind::Variable:
      out += 'x';
      break;
    case Node::Kind::Unary:
      if (n.uop == UnaryOp::Neg) {
        out += "(-";
        print_node(*n.a, out);
        out += ')';
      } else {
        out += unary_name(n.uop);
        out += '(';
        print_node(*n.a, out);
        out += ')';
      }
      break;
    case Node::Kind::Binary:
      out += '(';
      print_node(*n.a, out);
      out += binary_symbol(n.bop);
      print_node(*n.b, out);
      out += ')';
      break;
  }
}

double eval_node(const Node& n, double x) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.value;
    case Node::Kind::Variable:
      return x;
    case Node::Kind::Unary: {
      const double v = eval_node(*n.a, x);
      double r = 0.0;
      switch (n.uop) {
        case UnaryOp::Neg: return -v;
        case UnaryOp::Abs: return std::fabs(v);
        case UnaryOp::Sin: r = std::sin(v); break;
        case UnaryOp::Cos: r = std::cos(v); break;
        case UnaryOp::Tan: r = std::tan(v); break;
        case UnaryOp::Exp: r = std::exp(v); break;
        case UnaryOp::Ln:
          if (!(v > 0.0)) throw EvalError("ln of non-positive value", x, node_string(n));
          r = std::log(v);
          break;
        case UnaryOp::Sqrt:
          if (v < 0.0) throw EvalError("sqrt of negative value", x, node_string(n));
          r = std::sqrt(v);
          break;
      }
      if (!std::isfinite(r)) throw EvalError("non-finite result", x, node_string(n));
      return r;
    }
    case Node::Kind::Binary: {
      const double va = eval_node(*n.a, x);
      const double vb = eval_node(*n.b, x);
      double r = 0.0;
      switch (n.bop) {
        case BinaryOp::Add: r = va + vb; break;
        case BinaryOp::Sub: r = va - vb; break;
        case BinaryOp::Mul: r = va * vb; break;
        case BinaryOp::Div:
          if (vb == 0.0) throw EvalError("division by zero", x, node_string(n));
          r = va / vb;
          break;
        case BinaryOp::Pow: r = std::pow(va, vb); break;
      }
      if (!std::isfinite(r)) throw EvalError("non-finite result", x, node_string(n));
      return r;
    }
  }
  return 0.0;  // unreachable
}

// Recursive-descent parser over the raw source; positions are byte offsets.
struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  Expr parse_expression() {
    Expr lhs = parse_term();
    for (;;) {
      if (consume('+')) {
        lhs = Expr::binary(BinaryOp::Add, lhs, parse_term());
      } else if (consume('-')) {
        lhs = Expr::binary(BinaryOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (consume('*')) {
        lhs = Expr::binary(BinaryOp::Mul, lhs, parse_unary());
      } else if (consume('/')) {
        lhs = Expr::binary(BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than '^': -x^2 parses as -(x^2).
  Expr parse_unary() {
    if (consume('-')) return Expr::unary(UnaryOp::Neg, parse_unary());
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (consume('^')) {
      // Right-associative; the exponent may carry its own sign: 2^-3.
      return Expr::binary(BinaryOp::Pow, base, parse_unary());
    }
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos >= src.size()) throw ParseError("unexpected end of expression", pos);
    const char c = src[pos];
    if (c == '(') {
      ++pos;
      Expr inner = parse_expression();
      if (!consume(')')) throw ParseError("expected ')'", pos);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  Expr parse_number() {
    double value = 0.0;
    const char* first = src.data() + pos;
    const char* last = src.data() + src.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) throw ParseError("malformed number", pos);
    pos += static_cast<std::size_t>(ptr - first);
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      ++pos;
    }
    const std::string name(src.substr(start, pos - start));
    if (name == "x") return Expr::variable();

    UnaryOp op;
    if (name == "sin") op = UnaryOp::Sin;
    else if (name == "cos") op = UnaryOp::Cos;
    else if (name == "tan") op = UnaryOp::Tan;
    else if (name == "exp") op = UnaryOp::Exp;
    else if (name == "ln") op = UnaryOp::Ln;
    else if (name == "sqrt") op = UnaryOp::Sqrt;
    else if (name == "abs") op = UnaryOp::Abs;
    else throw ParseError("unknown identifier '" + name + "'", start);

    if (!consume('(')) {
      throw ParseError("function '" + name + "' requires parentheses", pos);
    }
    Expr arg = parse_expression();
    if (!consume(')')) throw ParseError("expected ')'", pos);
    return Expr::unary(op, arg);
  }
};

}  // namespace

Expr Expr::parse(std::string_view source) {
  Parser parser{source};
  parser.skip_ws();
  if (parser.pos >= source.size()) throw ParseError("empty expression", 0);
  Expr result = parser.parse_expression();
  parser.skip_ws();
  if (parser.pos < source.size()) {
    throw ParseError("trailing characters", parser.pos);
  }
  return result;
}

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Variable;
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, const Expr& operand) {
  if (operand.empty()) throw std::invalid_argument("unary: empty operand");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->uop = op;
  n->a = operand.root_;
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
  if (lhs.empty() || rhs.empty()) throw std::invalid_argument("binary: empty operand");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bop = op;
  n->a = lhs.root_;
  n->b = rhs.root_;
  return Expr(std::move(n));
}

double Expr::eval(double x) const {
  if (empty()) throw std::logic_error("eval of empty expression");
  return eval_node(*root_, x);
}

std::string Expr::to_string() const {
  if (empty()) return "";
  return node_string(*root_);
}

}  // namespace prufer
