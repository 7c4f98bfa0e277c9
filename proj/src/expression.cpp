#include "bma/expression.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace bma {

struct Expression::Node {
  enum class Op {
    Num, Var, Add, Sub, Mul, Div, Pow, Neg,
    Exp, Sin, Cos, Sqrt, Log, Abs, Min, Max
  };
  Op op = Op::Num;
  double num = 0.0;
  int var = 0;  // 0:x 1:y 2:r 3:theta 4:s
  std::shared_ptr<const Node> a, b;

  double eval(const EvalContext& c) const {
    switch (op) {
      case Op::Num: return num;
      case Op::Var:
        switch (var) {
          case 0: return c.x;
          case 1: return c.y;
          case 2: return c.r;
          case 3: return c.theta;
          default: return c.sheet;
        }
      case Op::Add: return a->eval(c) + b->eval(c);
      case Op::Sub: return a->eval(c) - b->eval(c);
      case Op::Mul: return a->eval(c) * b->eval(c);
      case Op::Div: return a->eval(c) / b->eval(c);
      case Op::Pow: return std::pow(a->eval(c), b->eval(c));
      case Op::Neg: return -a->eval(c);
      case Op::Exp: return std::exp(a->eval(c));
      case Op::Sin: return std::sin(a->eval(c));
      case Op::Cos: return std::cos(a->eval(c));
      case Op::Sqrt: return std::sqrt(a->eval(c));
      case Op::Log: return std::log(a->eval(c));
      case Op::Abs: return std::abs(a->eval(c));
      case Op::Min: return std::min(a->eval(c), b->eval(c));
      case Op::Max: return std::max(a->eval(c), b->eval(c));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::Config, "expression parse error at position " +
                                       std::to_string(pos) + ": " + what +
                                       " in '" + s + "'");
  }

  NodePtr make(Expression::Node n) {
    return std::make_shared<Expression::Node>(std::move(n));
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip();
      if (eat('+')) {
        Expression::Node n;
        n.op = Expression::Node::Op::Add;
        n.a = lhs;
        n.b = term();
        lhs = make(std::move(n));
      } else if (eat('-')) {
        Expression::Node n;
        n.op = Expression::Node::Op::Sub;
        n.a = lhs;
        n.b = term();
        lhs = make(std::move(n));
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip();
      if (eat('*')) {
        Expression::Node n;
        n.op = Expression::Node::Op::Mul;
        n.a = lhs;
        n.b = factor();
        lhs = make(std::move(n));
      } else if (eat('/')) {
        Expression::Node n;
        n.op = Expression::Node::Op::Div;
        n.a = lhs;
        n.b = factor();
        lhs = make(std::move(n));
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    skip();
    if (eat('^')) {
      Expression::Node n;
      n.op = Expression::Node::Op::Pow;
      n.a = base;
      n.b = factor();  // right-associative
      return make(std::move(n));
    }
    return base;
  }

  NodePtr unary() {
    skip();
    if (eat('-')) {
      Expression::Node n;
      n.op = Expression::Node::Op::Neg;
      n.a = unary();
      return make(std::move(n));
    }
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t end;
      double v = std::stod(s.substr(pos), &end);
      pos += end;
      Expression::Node n;
      n.op = Expression::Node::Op::Num;
      n.num = v;
      return make(std::move(n));
    }
    if (c == '(') {
      ++pos;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        ++pos;
      std::string id = s.substr(start, pos - start);
      skip();
      if (pos < s.size() && s[pos] == '(') {
        ++pos;
        NodePtr a = expr();
        NodePtr b;
        bool binary = id == "min" || id == "max" || id == "pow";
        if (binary) {
          if (!eat(',')) fail("expected ','");
          b = expr();
        }
        if (!eat(')')) fail("expected ')'");
        Expression::Node n;
        n.a = a;
        n.b = b;
        using Op = Expression::Node::Op;
        if (id == "exp") n.op = Op::Exp;
        else if (id == "sin") n.op = Op::Sin;
        else if (id == "cos") n.op = Op::Cos;
        else if (id == "sqrt") n.op = Op::Sqrt;
        else if (id == "log") n.op = Op::Log;
        else if (id == "abs") n.op = Op::Abs;
        else if (id == "min") n.op = Op::Min;
        else if (id == "max") n.op = Op::Max;
        else if (id == "pow") n.op = Op::Pow;
        else fail("unknown function '" + id + "'");
        return make(std::move(n));
      }
      Expression::Node n;
      if (id == "pi") {
        n.op = Expression::Node::Op::Num;
        n.num = kPi;
        return make(std::move(n));
      }
      n.op = Expression::Node::Op::Var;
      if (id == "x") n.var = 0;
      else if (id == "y") n.var = 1;
      else if (id == "r") n.var = 2;
      else if (id == "theta") n.var = 3;
      else if (id == "s" || id == "sheet") n.var = 4;
      else fail("unknown identifier '" + id + "'");
      return make(std::move(n));
    }
    fail("unexpected character");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  Expression e;
  e.root_ = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  e.text_ = text;
  return e;
}

double Expression::eval(const EvalContext& ctx) const {
  if (!root_) throw Error(ErrorKind::Config, "empty expression");
  return root_->eval(ctx);
}

}  // namespace bma
