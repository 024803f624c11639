#pragma once

// Scalar expressions over x1..xn, parsed by recursive descent.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-'? atom ('^' uint)?
//   atom   := number | xi | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | tanh | atan
//
// Every denominator must be a positive constant plus nonnegative terms
// (even powers or self-products of sin/tanh-free subtrees, optionally times a
// positive constant), so evaluation is total on Rⁿ.

#include <cctype>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "dual.hpp"

namespace rackworks {

class ParseError : public InputError {
public:
  ParseError(std::size_t offset, const std::string &msg)
      : InputError("offset " + std::to_string(offset) + ": " + msg), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Tanh, Atan };

struct ExprNode {
  Op op = Op::Const;
  double value = 0; // Const
  int index = 0;    // Var (0-based) or Pow exponent
  std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace detail {

inline NodePtr make_node(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double value = 0,
                         int index = 0) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = value;
  n->index = index;
  return n;
}

inline bool same_tree(const ExprNode *x, const ExprNode *y) {
  if (x == y)
    return true;
  if (!x || !y || x->op != y->op || x->value != y->value || x->index != y->index)
    return false;
  return same_tree(x->a.get(), y->a.get()) && same_tree(x->b.get(), y->b.get());
}

inline bool free_of_sin_tanh(const ExprNode *n) {
  if (!n)
    return true;
  if (n->op == Op::Sin || n->op == Op::Tanh)
    return false;
  return free_of_sin_tanh(n->a.get()) && free_of_sin_tanh(n->b.get());
}

inline bool positive_constant(const ExprNode *n) { return n->op == Op::Const && n->value > 0; }

/// Even power or u*u of a sin/tanh-free subtree, possibly scaled by a
/// positive constant on either side.
inline bool nonnegative_term(const ExprNode *n) {
  if (n->op == Op::Pow)
    return n->index % 2 == 0 && free_of_sin_tanh(n->a.get());
  if (n->op == Op::Mul) {
    if (same_tree(n->a.get(), n->b.get()))
      return free_of_sin_tanh(n->a.get());
    if (positive_constant(n->a.get()))
      return nonnegative_term(n->b.get());
    if (positive_constant(n->b.get()))
      return nonnegative_term(n->a.get());
  }
  return false;
}

inline void collect_summands(const ExprNode *n, std::vector<const ExprNode *> &out) {
  if (n->op == Op::Add) {
    collect_summands(n->a.get(), out);
    collect_summands(n->b.get(), out);
  } else {
    out.push_back(n);
  }
}

inline bool guarded_denominator(const ExprNode *n) {
  std::vector<const ExprNode *> terms;
  collect_summands(n, terms);
  bool hasConstant = false;
  for (const auto *t : terms) {
    if (positive_constant(t))
      hasConstant = true;
    else if (!nonnegative_term(t))
      return false;
  }
  return hasConstant;
}

class Parser {
public:
  Parser(const std::string &src, int n) : src_(src), n_(n) {}

  NodePtr parse() {
    skip();
    if (pos_ == src_.size())
      throw ParseError(pos_, "empty expression");
    auto e = expr();
    skip();
    if (pos_ != src_.size())
      throw ParseError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

private:
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError(pos_, std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    while (true) {
      if (accept('+'))
        lhs = make_node(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = make_node(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = factor();
    while (true) {
      if (accept('*')) {
        lhs = make_node(Op::Mul, lhs, factor());
      } else if (accept('/')) {
        skip();
        const std::size_t at = pos_;
        auto den = factor();
        if (!guarded_denominator(den.get()))
          throw ParseError(at, "denominator is not a positive constant plus "
                               "even powers or squares");
        lhs = make_node(Op::Div, lhs, den);
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    const bool negate = accept('-');
    auto base = atom();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      if (start == pos_)
        throw ParseError(pos_, "expected unsigned integer exponent");
      if (pos_ - start > 3)
        throw ParseError(start, "exponent too large");
      base = make_node(Op::Pow, base, nullptr, 0, std::stoi(src_.substr(start, pos_ - start)));
    }
    return negate ? make_node(Op::Neg, base) : base;
  }

  NodePtr atom() {
    skip();
    if (pos_ == src_.size())
      throw ParseError(pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (accept('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      const std::string name = src_.substr(start, pos_ - start);
      if (name.size() >= 2 && name[0] == 'x' &&
          name.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int i = std::stoi(name.substr(1));
        if (i < 1 || i > n_)
          throw ParseError(start, "variable " + name + " outside dimension " + std::to_string(n_));
        return make_node(Op::Var, nullptr, nullptr, 0, i - 1);
      }
      Op f;
      if (name == "sin")
        f = Op::Sin;
      else if (name == "cos")
        f = Op::Cos;
      else if (name == "exp")
        f = Op::Exp;
      else if (name == "tanh")
        f = Op::Tanh;
      else if (name == "atan")
        f = Op::Atan;
      else
        throw ParseError(start, "unknown identifier '" + name + "'");
      expect('(');
      auto arg = expr();
      expect(')');
      return make_node(f, arg);
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
    }
    const std::string text = src_.substr(start, pos_ - start);
    if (text == ".")
      throw ParseError(start, "malformed number");
    std::istringstream is(text);
    is.imbue(std::locale::classic());
    double v = 0;
    is >> v;
    return make_node(Op::Const, nullptr, nullptr, v);
  }

  const std::string &src_;
  int n_;
  std::size_t pos_ = 0;
};

inline void to_postfix(const NodePtr &n, std::vector<const ExprNode *> &out) {
  if (!n)
    return;
  to_postfix(n->a, out);
  to_postfix(n->b, out);
  out.push_back(n.get());
}

template <class T> T ipow(const T &x, int k) {
  T r(1.0);
  for (int i = 0; i < k; ++i)
    r = r * x;
  return r;
}

} // namespace detail

/// Immutable parsed expression; cheap to copy.
class Expr {
public:
  Expr() : Expr(detail::make_node(Op::Const)) {}
  explicit Expr(NodePtr root) : root_(std::move(root)) {
    detail::to_postfix(root_, program_);
  }

  const NodePtr &root() const { return root_; }

  bool is_zero_constant() const { return root_->op == Op::Const && root_->value == 0; }

  template <class T> T eval(const std::vector<T> &x) const {
    using std::atan, std::cos, std::exp, std::sin, std::tanh;
    std::vector<T> stack;
    stack.reserve(program_.size());
    for (const ExprNode *n : program_) {
      switch (n->op) {
      case Op::Const:
        stack.emplace_back(n->value);
        break;
      case Op::Var:
        stack.push_back(x[n->index]);
        break;
      case Op::Neg:
        stack.back() = -stack.back();
        break;
      case Op::Pow:
        stack.back() = detail::ipow(stack.back(), n->index);
        break;
      case Op::Sin:
        stack.back() = sin(stack.back());
        break;
      case Op::Cos:
        stack.back() = cos(stack.back());
        break;
      case Op::Exp:
        stack.back() = exp(stack.back());
        break;
      case Op::Tanh:
        stack.back() = tanh(stack.back());
        break;
      case Op::Atan:
        stack.back() = atan(stack.back());
        break;
      default: {
        T rhs = std::move(stack.back());
        stack.pop_back();
        T &lhs = stack.back();
        if (n->op == Op::Add)
          lhs = lhs + rhs;
        else if (n->op == Op::Sub)
          lhs = lhs - rhs;
        else if (n->op == Op::Mul)
          lhs = lhs * rhs;
        else
          lhs = lhs / rhs;
      }
      }
    }
    return stack.back();
  }

  std::string to_string() const { return render(root_.get()); }

private:
  static std::string render(const ExprNode *n) {
    auto bin = [&](const char *op) {
      return "(" + render(n->a.get()) + op + render(n->b.get()) + ")";
    };
    auto fn = [&](const char *name) { return std::string(name) + "(" + render(n->a.get()) + ")"; };
    switch (n->op) {
    case Op::Const: {
      std::ostringstream os;
      os.imbue(std::locale::classic());
      os.precision(17);
      os << n->value;
      return os.str();
    }
    case Op::Var:
      return "x" + std::to_string(n->index + 1);
    case Op::Add:
      return bin("+");
    case Op::Sub:
      return bin("-");
    case Op::Mul:
      return bin("*");
    case Op::Div:
      return bin("/");
    case Op::Neg:
      return "(-" + render(n->a.get()) + ")";
    case Op::Pow:
      return "(" + render(n->a.get()) + ")^" + std::to_string(n->index);
    case Op::Sin:
      return fn("sin");
    case Op::Cos:
      return fn("cos");
    case Op::Exp:
      return fn("exp");
    case Op::Tanh:
      return fn("tanh");
    default:
      return fn("atan");
    }
  }

  NodePtr root_;
  std::vector<const ExprNode *> program_;
};

/// Parses src over variables x1..xn. Throws ParseError (an InputError) with
/// the byte offset of the problem.
inline Expr parse_expr(const std::string &src, int n) {
  if (n < 1 || n > kMaxDim)
    throw InputError("expression dimension must be in [1," + std::to_string(kMaxDim) + "]");
  return Expr(detail::Parser(src, n).parse());
}

/// Comma-separated list of exactly n expressions.
inline std::vector<Expr> parse_expr_list(const std::string &src, int n) {
  std::vector<Expr> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = src.find(',', start);
    const std::string piece = src.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
    try {
      out.push_back(parse_expr(piece, n));
    } catch (const ParseError &e) {
      throw ParseError(start + e.offset(), std::string(e.what()).substr(
                                               std::string(e.what()).find(": ") + 2));
    }
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  if (static_cast<int>(out.size()) != n)
    throw InputError("expected " + std::to_string(n) + " comma-separated expressions, got " +
                     std::to_string(out.size()));
  return out;
}

namespace expr {

inline Expr constant(double c) { return Expr(detail::make_node(Op::Const, nullptr, nullptr, c)); }
inline Expr variable(int i) { return Expr(detail::make_node(Op::Var, nullptr, nullptr, 0, i)); }
inline Expr add(const Expr &a, const Expr &b) {
  return Expr(detail::make_node(Op::Add, a.root(), b.root()));
}
inline Expr sub(const Expr &a, const Expr &b) {
  return Expr(detail::make_node(Op::Sub, a.root(), b.root()));
}
inline Expr mul(const Expr &a, const Expr &b) {
  return Expr(detail::make_node(Op::Mul, a.root(), b.root()));
}
inline Expr scale(double c, const Expr &a) { return mul(constant(c), a); }

inline std::vector<Expr> zeros(int n) { return std::vector<Expr>(n, constant(0)); }

/// c1·a + c2·b componentwise.
inline std::vector<Expr> combine(double c1, const std::vector<Expr> &a, double c2,
                                 const std::vector<Expr> &b) {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back(add(scale(c1, a[i]), scale(c2, b[i])));
  return out;
}

inline std::vector<Expr> times(const Expr &f, const std::vector<Expr> &a) {
  std::vector<Expr> out;
  for (const auto &e : a)
    out.push_back(mul(f, e));
  return out;
}

} // namespace expr

template <class T> std::vector<T> eval_all(const std::vector<Expr> &es, const std::vector<T> &x) {
  std::vector<T> out;
  out.reserve(es.size());
  for (const auto &e : es)
    out.push_back(e.eval(x));
  return out;
}

} // namespace rackworks
