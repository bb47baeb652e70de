#include "crcurv/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "crcurv/errors.hpp"

namespace crcurv {

// ---------------------------------------------------------------------------
// Jet2

Jet2::Jet2(int m, double value)
    : m_(m), value_(value), grad_(m, 0.0), hess_(m * (m + 1) / 2, 0.0) {}

Jet2 Jet2::variable(int m, int index, double value) {
  Jet2 j(m, value);
  j.grad_[index] = 1.0;
  return j;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  value_ += o.value_;
  for (int i = 0; i < m_; ++i) grad_[i] += o.grad_[i];
  for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  value_ -= o.value_;
  for (int i = 0; i < m_; ++i) grad_[i] -= o.grad_[i];
  for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] -= o.hess_[i];
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
  int p = 0;
  for (int i = 0; i < m_; ++i) {
    for (int j = i; j < m_; ++j, ++p) {
      hess_[p] = value_ * o.hess_[p] + o.value_ * hess_[p] + grad_[i] * o.grad_[j] +
                 grad_[j] * o.grad_[i];
    }
  }
  for (int i = 0; i < m_; ++i) grad_[i] = value_ * o.grad_[i] + o.value_ * grad_[i];
  value_ *= o.value_;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& o) {
  if (o.value_ == 0.0) throw DomainError("division by zero");
  const double b = o.value_;
  *this *= o.chain(1.0 / b, -1.0 / (b * b), 2.0 / (b * b * b));
  return *this;
}

Jet2 operator-(Jet2 a) {
  a.value_ = -a.value_;
  for (double& g : a.grad_) g = -g;
  for (double& h : a.hess_) h = -h;
  return a;
}

Jet2 Jet2::chain(double f, double df, double d2f) const {
  Jet2 r(m_, f);
  int p = 0;
  for (int i = 0; i < m_; ++i) {
    r.grad_[i] = df * grad_[i];
    for (int j = i; j < m_; ++j, ++p) r.hess_[p] = df * hess_[p] + d2f * grad_[i] * grad_[j];
  }
  return r;
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.chain(s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.chain(c, -s, -c);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.chain(e, e, e);
}

Jet2 log(const Jet2& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of non-positive value");
  return a.chain(std::log(x), 1.0 / x, -1.0 / (x * x));
}

Jet2 sqrt(const Jet2& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("sqrt derivative undefined at non-positive value");
  const double r = std::sqrt(x);
  return a.chain(r, 0.5 / r, -0.25 / (r * x));
}

Jet2 pow(const Jet2& a, int n) {
  const double x = a.value();
  if (n < 0 && x == 0.0) throw DomainError("negative power of zero");
  if (n == 0) return Jet2(a.dim(), 1.0);
  const double f = std::pow(x, n);
  const double df = n * std::pow(x, n - 1);
  const double d2f = n == 1 ? 0.0 : double(n) * (n - 1) * std::pow(x, n - 2);
  return a.chain(f, df, d2f);
}

// ---------------------------------------------------------------------------
// Parser

class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, int vars) : src_(src) { e_.vars_ = vars; }

  Expression run() {
    if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw SyntaxError("empty expression", 0);
    parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return std::move(e_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg + " at offset " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(Expression::Node n) {
    e_.nodes_.push_back(n);
    return static_cast<int>(e_.nodes_.size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        int rhs = parse_term();
        lhs = push({Op::Add, 0.0, 0, lhs, rhs});
      } else if (accept('-')) {
        int rhs = parse_term();
        lhs = push({Op::Sub, 0.0, 0, lhs, rhs});
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        int rhs = parse_unary();
        lhs = push({Op::Mul, 0.0, 0, lhs, rhs});
      } else if (accept('/')) {
        int rhs = parse_unary();
        lhs = push({Op::Div, 0.0, 0, lhs, rhs});
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) {
      int child = parse_unary();
      return push({Op::Neg, 0.0, 0, child, -1});
    }
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    while (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      bool negative = accept('-');
      skip_ws();
      std::size_t digits = pos_;
      while (digits < src_.size() && std::isdigit(static_cast<unsigned char>(src_[digits]))) ++digits;
      if (digits == pos_) fail("exponent must be an integer literal");
      if (digits < src_.size() && (src_[digits] == '.' || src_[digits] == 'e' || src_[digits] == 'E')) {
        pos_ = start;
        fail("exponent must be an integer literal");
      }
      const std::string text(src_.substr(pos_, digits - pos_));
      if (text.size() > 6) fail("exponent too large");
      int n = std::stoi(text);
      pos_ = digits;
      base = push({Op::Pow, 0.0, negative ? -n : n, base, -1});
    }
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  int parse_number() {
    const std::string rest(src_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    if (!std::isfinite(v)) fail("number out of range");
    return push({Op::Const, v, 0, -1, -1});
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));

    static const std::pair<const char*, Op> functions[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}};
    for (const auto& [fname, op] : functions) {
      if (name != fname) continue;
      if (!accept('(')) fail("expected '(' after " + name);
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ')')
        throw ArityError(name + " takes exactly one argument", start);
      int arg = parse_expr();
      if (accept(',')) throw ArityError(name + " takes exactly one argument", start);
      if (!accept(')')) fail("expected ')'");
      return push({op, 0.0, 0, arg, -1});
    }

    if (name.size() >= 2 && name[0] == 'u' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos && name[1] != '0') {
      const long idx = name.size() > 9 ? -1 : std::stol(name.substr(1));
      if (idx >= 1 && idx <= e_.vars_) return push({Op::Var, 0.0, static_cast<int>(idx - 1), -1, -1});
    }
    throw UnknownIdentifier("unknown identifier '" + name + "' at offset " + std::to_string(start), start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Expression e_;
};

Expression parse_expression(std::string_view src, int variables) {
  if (variables < 0) throw SyntaxError("negative variable count", 0);
  return ExpressionParser(src, variables).run();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

void check_point(const Expression& e, std::span<const double> u) {
  if (static_cast<int>(u.size()) != e.variables())
    throw DimensionError("expression expects " + std::to_string(e.variables()) + " variables, got " +
                         std::to_string(u.size()));
}

}  // namespace

double Expression::eval(std::span<const double> u) const {
  check_point(*this, u);
  std::vector<double> v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    const double a = n.lhs >= 0 ? v[n.lhs] : 0.0;
    const double b = n.rhs >= 0 ? v[n.rhs] : 0.0;
    double r = 0.0;
    switch (n.op) {
      case Op::Const: r = n.value; break;
      case Op::Var: r = u[n.index]; break;
      case Op::Add: r = a + b; break;
      case Op::Sub: r = a - b; break;
      case Op::Mul: r = a * b; break;
      case Op::Div:
        if (b == 0.0) throw DomainError("division by zero");
        r = a / b;
        break;
      case Op::Neg: r = -a; break;
      case Op::Pow:
        if (n.index < 0 && a == 0.0) throw DomainError("negative power of zero");
        r = std::pow(a, n.index);
        break;
      case Op::Sin: r = std::sin(a); break;
      case Op::Cos: r = std::cos(a); break;
      case Op::Exp: r = std::exp(a); break;
      case Op::Log:
        if (!(a > 0.0)) throw DomainError("log of non-positive value");
        r = std::log(a);
        break;
      case Op::Sqrt:
        if (a < 0.0) throw DomainError("sqrt of negative value");
        r = std::sqrt(a);
        break;
    }
    if (!std::isfinite(r)) throw DomainError("non-finite intermediate value");
    v[i] = r;
  }
  return v.back();
}

Jet2 Expression::eval_jet2(std::span<const double> u) const {
  check_point(*this, u);
  const int m = vars_;
  std::vector<Jet2> v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Const: v[i] = Jet2(m, n.value); break;
      case Op::Var: v[i] = Jet2::variable(m, n.index, u[n.index]); break;
      case Op::Add: v[i] = v[n.lhs] + v[n.rhs]; break;
      case Op::Sub: v[i] = v[n.lhs] - v[n.rhs]; break;
      case Op::Mul: v[i] = v[n.lhs] * v[n.rhs]; break;
      case Op::Div: v[i] = v[n.lhs] / v[n.rhs]; break;
      case Op::Neg: v[i] = -v[n.lhs]; break;
      case Op::Pow: v[i] = pow(v[n.lhs], n.index); break;
      case Op::Sin: v[i] = sin(v[n.lhs]); break;
      case Op::Cos: v[i] = cos(v[n.lhs]); break;
      case Op::Exp: v[i] = exp(v[n.lhs]); break;
      case Op::Log: v[i] = log(v[n.lhs]); break;
      case Op::Sqrt: v[i] = sqrt(v[n.lhs]); break;
    }
    if (!std::isfinite(v[i].value())) throw DomainError("non-finite intermediate value");
  }
  return v.back();
}

bool Expression::same_subtree(int a, const Expression& other, int b) const {
  const Node& x = nodes_[a];
  const Node& y = other.nodes_[b];
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::Const: return x.value == y.value;
    case Op::Var: return x.index == y.index;
    case Op::Pow:
      return x.index == y.index && same_subtree(x.lhs, other, y.lhs);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return same_subtree(x.lhs, other, y.lhs) && same_subtree(x.rhs, other, y.rhs);
    default: return same_subtree(x.lhs, other, y.lhs);
  }
}

bool Expression::operator==(const Expression& other) const {
  if (vars_ != other.vars_) return false;
  if (nodes_.empty() || other.nodes_.empty()) return nodes_.empty() && other.nodes_.empty();
  return same_subtree(root(), other, other.root());
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    default: return nullptr;
  }
}

void print_node(const Expression& e, int idx, std::string& out);

void print_child(const Expression& e, int idx, int min_prec, std::string& out) {
  if (precedence(e.nodes()[idx].op) < min_prec) {
    out += '(';
    print_node(e, idx, out);
    out += ')';
  } else {
    print_node(e, idx, out);
  }
}

void print_node(const Expression& e, int idx, std::string& out) {
  const auto& n = e.nodes()[idx];
  switch (n.op) {
    case Op::Const: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Op::Var: out += "u" + std::to_string(n.index + 1); return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const int p = precedence(n.op);
      print_child(e, n.lhs, p, out);
      out += n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
      print_child(e, n.rhs, p + 1, out);
      return;
    }
    case Op::Neg:
      out += '-';
      print_child(e, n.lhs, precedence(Op::Neg), out);
      return;
    case Op::Pow:
      print_child(e, n.lhs, precedence(Op::Pow), out);
      out += '^' + std::to_string(n.index);
      return;
    default:
      out += function_name(n.op);
      out += '(';
      print_node(e, n.lhs, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expression& e) {
  std::string out;
  if (!e.nodes().empty()) print_node(e, e.root(), out);
  return out;
}

}  // namespace crcurv
