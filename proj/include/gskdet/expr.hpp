#pragma once

// Analytic expressions of one complex variable `lambda`.  Parsed into an
// immutable AST supporting complex evaluation and exact symbolic
// differentiation; the phase functions of a kernel instance live here.

#include <cctype>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "gskdet/scalar.hpp"

namespace gskdet {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class eval_error : public numeric_error {
 public:
  explicit eval_error(const std::string& what) : numeric_error(what) {}
};

namespace detail {

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Exp, Sin, Cos, Log };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  cplx value{};       // Constant
  int exponent{};     // Pow
  NodePtr a, b;       // children

  Node(NodeKind k, NodePtr lhs, NodePtr rhs) : kind(k), a(std::move(lhs)), b(std::move(rhs)) {}
  explicit Node(cplx v) : kind(NodeKind::Constant), value(v) {}
  Node() : kind(NodeKind::Variable) {}
  Node(NodePtr base, int n) : kind(NodeKind::Pow), exponent(n), a(std::move(base)) {}
};

inline NodePtr make_const(cplx v) { return std::make_shared<Node>(v); }
inline NodePtr make_var() { return std::make_shared<Node>(); }
inline NodePtr make_pow(NodePtr base, int n) { return std::make_shared<Node>(std::move(base), n); }
inline NodePtr make_un(NodeKind k, NodePtr arg) { return std::make_shared<Node>(k, std::move(arg), nullptr); }

inline bool is_const(const NodePtr& n, cplx v) {
  return n->kind == NodeKind::Constant && n->value == v;
}

// Binary constructor with constant folding and unit/zero simplification,
// so iterated derivatives stay small.
inline NodePtr make_bin(NodeKind k, NodePtr l, NodePtr r) {
  if (l->kind == NodeKind::Constant && r->kind == NodeKind::Constant) {
    switch (k) {
      case NodeKind::Add: return make_const(l->value + r->value);
      case NodeKind::Sub: return make_const(l->value - r->value);
      case NodeKind::Mul: return make_const(l->value * r->value);
      default: break;  // fold Div only at eval time (0 denominators)
    }
  }
  switch (k) {
    case NodeKind::Add:
      if (is_const(l, 0.0)) return r;
      if (is_const(r, 0.0)) return l;
      break;
    case NodeKind::Sub:
      if (is_const(r, 0.0)) return l;
      break;
    case NodeKind::Mul:
      if (is_const(l, 0.0) || is_const(r, 0.0)) return make_const(0.0);
      if (is_const(l, 1.0)) return r;
      if (is_const(r, 1.0)) return l;
      break;
    case NodeKind::Div:
      if (is_const(l, 0.0)) return make_const(0.0);
      if (is_const(r, 1.0)) return l;
      break;
    default:
      break;
  }
  return std::make_shared<Node>(k, std::move(l), std::move(r));
}

inline cplx eval_node(const Node& n, cplx z) {
  switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable: return z;
    case NodeKind::Add: return eval_node(*n.a, z) + eval_node(*n.b, z);
    case NodeKind::Sub: return eval_node(*n.a, z) - eval_node(*n.b, z);
    case NodeKind::Mul: return eval_node(*n.a, z) * eval_node(*n.b, z);
    case NodeKind::Div: {
      cplx den = eval_node(*n.b, z);
      if (den == cplx(0.0)) throw eval_error("division by zero");
      return eval_node(*n.a, z) / den;
    }
    case NodeKind::Pow: {
      cplx base = eval_node(*n.a, z);
      int k = n.exponent;
      if (k < 0) {
        if (base == cplx(0.0)) throw eval_error("negative power of zero");
        base = 1.0 / base;
        k = -k;
      }
      cplx r = 1.0;
      cplx p = base;
      for (; k > 0; k >>= 1) {
        if (k & 1) r *= p;
        p *= p;
      }
      return r;
    }
    case NodeKind::Exp: return std::exp(eval_node(*n.a, z));
    case NodeKind::Sin: return std::sin(eval_node(*n.a, z));
    case NodeKind::Cos: return std::cos(eval_node(*n.a, z));
    case NodeKind::Log: {
      cplx arg = eval_node(*n.a, z);
      if (arg == cplx(0.0)) throw eval_error("log of zero");
      return std::log(arg);
    }
  }
  throw eval_error("corrupt AST");
}

inline NodePtr diff_node(const NodePtr& n) {
  using K = NodeKind;
  switch (n->kind) {
    case K::Constant: return make_const(0.0);
    case K::Variable: return make_const(1.0);
    case K::Add: return make_bin(K::Add, diff_node(n->a), diff_node(n->b));
    case K::Sub: return make_bin(K::Sub, diff_node(n->a), diff_node(n->b));
    case K::Mul:
      return make_bin(K::Add, make_bin(K::Mul, diff_node(n->a), n->b),
                      make_bin(K::Mul, n->a, diff_node(n->b)));
    case K::Div:
      // (a/b)' = a'/b - a b'/b^2
      return make_bin(K::Sub, make_bin(K::Div, diff_node(n->a), n->b),
                      make_bin(K::Div, make_bin(K::Mul, n->a, diff_node(n->b)),
                               make_pow(n->b, 2)));
    case K::Pow: {
      if (n->exponent == 0) return make_const(0.0);
      NodePtr inner = n->exponent == 1 ? make_const(1.0) : make_pow(n->a, n->exponent - 1);
      return make_bin(K::Mul, make_const(cplx(double(n->exponent), 0.0)),
                      make_bin(K::Mul, inner, diff_node(n->a)));
    }
    case K::Exp: return make_bin(K::Mul, make_un(K::Exp, n->a), diff_node(n->a));
    case K::Sin: return make_bin(K::Mul, make_un(K::Cos, n->a), diff_node(n->a));
    case K::Cos:
      return make_bin(K::Mul, make_const(-1.0),
                      make_bin(K::Mul, make_un(K::Sin, n->a), diff_node(n->a)));
    case K::Log: return make_bin(K::Div, diff_node(n->a), n->a);
  }
  throw eval_error("corrupt AST");
}

inline void print_node(const Node& n, std::ostream& os) {
  auto num = [&os](double v) {
    std::ostringstream tmp;
    tmp.precision(17);
    tmp << v;
    os << tmp.str();
  };
  switch (n.kind) {
    case NodeKind::Constant:
      if (n.value.imag() == 0.0 && n.value.real() >= 0.0) {
        num(n.value.real());
      } else {
        os << '(';
        num(n.value.real());
        os << ',';
        num(n.value.imag());
        os << ')';
      }
      return;
    case NodeKind::Variable: os << "lambda"; return;
    case NodeKind::Add: case NodeKind::Sub: case NodeKind::Mul: case NodeKind::Div: {
      const char* op = n.kind == NodeKind::Add   ? "+"
                       : n.kind == NodeKind::Sub ? "-"
                       : n.kind == NodeKind::Mul ? "*"
                                                 : "/";
      os << '(';
      print_node(*n.a, os);
      os << op;
      print_node(*n.b, os);
      os << ')';
      return;
    }
    case NodeKind::Pow:
      os << '(';
      print_node(*n.a, os);
      os << ")^" << n.exponent;
      return;
    case NodeKind::Exp: os << "exp("; print_node(*n.a, os); os << ')'; return;
    case NodeKind::Sin: os << "sin("; print_node(*n.a, os); os << ')'; return;
    case NodeKind::Cos: os << "cos("; print_node(*n.a, os); os << ')'; return;
    case NodeKind::Log: os << "log("; print_node(*n.a, os); os << ')'; return;
  }
}

class Parser {
 public:
  explicit Parser(std::string text) : text_(std::move(text)) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) lhs = make_bin(NodeKind::Add, lhs, parse_product());
      else if (accept('-')) lhs = make_bin(NodeKind::Sub, lhs, parse_product());
      else return lhs;
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = make_bin(NodeKind::Mul, lhs, parse_unary());
      else if (accept('/')) lhs = make_bin(NodeKind::Div, lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_bin(NodeKind::Sub, make_const(0.0), parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) {
      int n = parse_int_exponent();
      return make_pow(base, n);
    }
    return base;
  }

  int parse_int_exponent() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected integer exponent");
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 64) { pos_ = start; fail("exponent too large"); }
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      pos_ = start;
      fail("non-integer exponent");
    }
    return neg ? int(-v) : int(v);
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make_const(parse_number());
    if (c == '(') return parse_paren_or_complex();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  double parse_number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // the 'e' was not an exponent
      }
    }
    try {
      std::size_t used = 0;
      double v = std::stod(text_.substr(start, pos_ - start), &used);
      if (used != pos_ - start) { pos_ = start; fail("malformed number"); }
      return v;
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  double parse_signed_number() {
    skip_ws();
    bool neg = accept('-');
    if (!neg) accept('+');
    skip_ws();
    if (pos_ >= text_.size() ||
        !(std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      fail("expected number");
    double v = parse_number();
    return neg ? -v : v;
  }

  // '(' starts either a complex literal "(re,im)" (numeric parts only) or
  // a parenthesized sub-expression.
  NodePtr parse_paren_or_complex() {
    std::size_t mark = pos_;
    ++pos_;  // consume '('
    skip_ws();
    bool maybe_literal =
        pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == '+');
    if (maybe_literal) {
      std::size_t save = pos_;
      try {
        double re = parse_signed_number();
        if (accept(',')) {
          double im = parse_signed_number();
          skip_ws();
          if (!accept(')')) fail("expected ')' in complex literal");
          return make_const(cplx(re, im));
        }
      } catch (const parse_error&) {
        // fall through to expression parse
      }
      pos_ = save;
    }
    NodePtr inner = parse_sum();
    skip_ws();
    if (!accept(')')) fail("expected ')'");
    (void)mark;
    return inner;
  }

  NodePtr parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "lambda") return make_var();
    NodeKind k;
    if (name == "exp") k = NodeKind::Exp;
    else if (name == "sin") k = NodeKind::Sin;
    else if (name == "cos") k = NodeKind::Cos;
    else if (name == "log") k = NodeKind::Log;
    else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    skip_ws();
    if (!accept('(')) fail("expected '(' after function name");
    NodePtr arg = parse_sum();
    if (!accept(')')) fail("expected ')'");
    return make_un(k, arg);
  }
};

}  // namespace detail

/// Immutable analytic expression in the variable `lambda`.
class AnalyticExpr {
 public:
  AnalyticExpr() : root_(detail::make_const(0.0)) {}

  static AnalyticExpr parse(const std::string& text) {
    return AnalyticExpr(detail::Parser(text).run());
  }

  static AnalyticExpr constant(cplx v) { return AnalyticExpr(detail::make_const(v)); }

  cplx eval(cplx z) const {
    if (!finite(z)) throw eval_error("non-finite evaluation point");
    cplx r = detail::eval_node(*root_, z);
    if (!finite(r)) throw eval_error("non-finite expression value");
    return r;
  }

  cplx operator()(cplx z) const { return eval(z); }

  AnalyticExpr derivative(int order = 1) const {
    if (order < 1 || order > 2) throw std::invalid_argument("derivative order must be 1 or 2");
    detail::NodePtr d = detail::diff_node(root_);
    if (order == 2) d = detail::diff_node(d);
    return AnalyticExpr(d);
  }

  std::string to_string() const {
    std::ostringstream os;
    detail::print_node(*root_, os);
    return os.str();
  }

 private:
  explicit AnalyticExpr(detail::NodePtr root) : root_(std::move(root)) {}
  detail::NodePtr root_;
};

}  // namespace gskdet
