#pragma once

#include <Eigen/Dense>
#include <vector>

namespace crcurv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// A (0,4) curvature tensor on an n-dimensional Euclidean space, in an
/// orthonormal basis. Convention: R(X,Y,Z,W) = <R(X,Y)Z, W>, so the sectional
/// curvature of an orthonormal pair is R(X,Y,Y,X).
///
/// Alongside the components the tensor keeps its curvature operator on
/// bivectors, Q[(ij),(kl)] = R(e_i,e_j,e_l,e_k) for i<j, k<l, which turns
/// R(x1,y1,y2,x2) into (x1^y1)^T Q (x2^y2). All hot-path evaluations go
/// through Q.
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  /// `components` holds R(e_i,e_j,e_k,e_l) at ((i*n + j)*n + k)*n + l.
  CurvatureTensor(int n, std::vector<double> components);

  static CurvatureTensor zero(int n);

  int dim() const { return n_; }
  double operator()(int i, int j, int k, int l) const { return data_[((i * n_ + j) * n_ + k) * n_ + l]; }
  const std::vector<double>& components() const { return data_; }
  const MatrixXd& bivector_operator() const { return op_; }

  /// Full quadrilinear evaluation R(x,y,z,w).
  double evaluate(const VectorXd& x, const VectorXd& y, const VectorXd& z, const VectorXd& w) const;

  /// R(x,y,y,x); the sectional curvature when x,y are orthonormal.
  double sectional(const VectorXd& x, const VectorXd& y) const;

  /// R(x1,y1,y2,x2) = (x1^y1)^T Q (x2^y2).
  double pairing(const VectorXd& x1, const VectorXd& y1, const VectorXd& x2, const VectorXd& y2) const;

  /// Wedge product coordinates in the (i<j) bivector basis.
  VectorXd wedge(const VectorXd& x, const VectorXd& y) const;

  // Allocation-free forms over raw n-vectors, for optimizer inner loops.
  double sectional(const double* x, const double* y) const;
  double pairing(const double* x1, const double* y1, const double* x2, const double* y2) const;

  /// Pull back along the columns of `frame` (n x r): the result's (a,b,c,d)
  /// component is R(f_a, f_b, f_c, f_d).
  CurvatureTensor restricted(const MatrixXd& frame) const;

  CurvatureTensor operator-() const;
  CurvatureTensor operator+(const CurvatureTensor& o) const;
  CurvatureTensor operator*(double s) const;

  /// Largest violation of the antisymmetries and of pair symmetry.
  double symmetry_residual() const;
  /// Largest violation of the first Bianchi identity.
  double bianchi_residual() const;
  double max_abs() const;

 private:
  void build_operator();
  void wedge_into(const double* x, const double* y, double* out) const;
  double quadratic(const double* a, const double* b) const;

  int n_ = 0;
  std::vector<double> data_;
  MatrixXd op_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Gauss-type tensor of a vector-valued symmetric form:
/// R(X,Y,Z,W) = <B(X,W),B(Y,Z)> - <B(X,Z),B(Y,W)>.
/// `forms[c]` is the c-th component of B as a symmetric n x n matrix.
CurvatureTensor gauss_tensor(const std::vector<MatrixXd>& forms);

/// R(X,Y,Z,W) = kappa (<X,W><Y,Z> - <X,Z><Y,W>): constant sectional curvature.
CurvatureTensor constant_curvature_tensor(int n, double kappa);

/// The complex space form tensor with holomorphic sectional curvature 4c for
/// the complex structure `J` (n x n, J^2 = -I, J orthogonal).
CurvatureTensor complex_space_form_tensor(const MatrixXd& J, double c);

}  // namespace crcurv
