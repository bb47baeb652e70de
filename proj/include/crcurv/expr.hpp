#pragma once

// Scalar expressions over u1..um with exact second-order forward derivatives.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)*
//   primary := number | 'u'<i> | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | log | sqrt

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crcurv {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Log, Sqrt };

/// Value, gradient and Hessian of a scalar function of m variables.
/// The Hessian is kept as its packed upper triangle, so it is symmetric by
/// construction.
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(int m, double value = 0.0);

  /// The jet of the coordinate function u_{index+1}.
  static Jet2 variable(int m, int index, double value);

  int dim() const { return m_; }
  double value() const { return value_; }
  double gradient(int i) const { return grad_[i]; }
  double hessian(int i, int j) const { return hess_[packed(i, j)]; }
  std::span<const double> gradient() const { return grad_; }

  double& value() { return value_; }
  double& gradient(int i) { return grad_[i]; }
  double& hessian(int i, int j) { return hess_[packed(i, j)]; }

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }
  friend Jet2 operator-(Jet2 a);

  /// Applies a scalar function given its value and first two derivatives at
  /// value().
  Jet2 chain(double f, double df, double d2f) const;

 private:
  int packed(int i, int j) const {
    if (i > j) std::swap(i, j);
    return i * m_ - i * (i - 1) / 2 + (j - i);
  }

  int m_ = 0;
  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;
};

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 pow(const Jet2& a, int exponent);

/// Immutable expression tree stored as a post-order node array: every child
/// index is smaller than its parent's, and the root is the last node.
class Expression {
 public:
  struct Node {
    Op op = Op::Const;
    double value = 0.0;  // Const
    int index = 0;       // Var: zero-based variable; Pow: exponent
    int lhs = -1;
    int rhs = -1;
  };

  Expression() = default;

  int variables() const { return vars_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return static_cast<int>(nodes_.size()) - 1; }

  double eval(std::span<const double> u) const;
  Jet2 eval_jet2(std::span<const double> u) const;

  /// Structural equality (same tree shape, operators, literals, variables).
  bool operator==(const Expression& other) const;

 private:
  friend class ExpressionParser;
  bool same_subtree(int a, const Expression& other, int b) const;

  int vars_ = 0;
  std::vector<Node> nodes_;
};

/// Parses `src` over variables u1..u<variables>. Throws SyntaxError (with
/// byte offset), UnknownIdentifier or ArityError.
Expression parse_expression(std::string_view src, int variables);

/// Prints with the minimum parentheses needed so that parsing the result
/// reproduces the same tree; literals use 17 significant digits.
std::string print(const Expression& e);

inline Jet2 eval_jet2(const Expression& e, std::span<const double> u) { return e.eval_jet2(u); }

}  // namespace crcurv
