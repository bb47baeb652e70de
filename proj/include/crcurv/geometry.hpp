#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "crcurv/ambient.hpp"
#include "crcurv/chart.hpp"
#include "crcurv/tensor.hpp"

namespace crcurv {

struct ToleranceConfig {
  double rank = 1e-8;
  double cr = 0.1;
  double orthonormality = 1e-10;
  double identity = 1e-9;
  double slack = 1e-6;
  double eq = 1e-6;
};

/// D = J(TM) cap TM and its complement, in tangent-frame coordinates.
struct CRSplit {
  MatrixXd d_frame;     // m x d, columns (x1, phi x1, x2, phi x2, ...)
  MatrixXd perp_frame;  // m x l
  MatrixXd phi;         // m x m: J on D, zero on D-perp
  VectorXd singular_values;
  /// Largest norm of the tangent part of J applied to a unit D-perp vector.
  double totally_real_residual = 0.0;
  int d() const { return static_cast<int>(d_frame.cols()); }
  int l() const { return static_cast<int>(perp_frame.cols()); }
};

/// Everything first- and second-order about the submanifold at one point.
/// Tangent quantities are expressed in the orthonormal tangent frame; normal
/// vectors in the orthonormal normal frame.
struct PointGeom {
  VectorXd u;
  VectorXd x;         // F(u)
  MatrixXd tangent;   // 2q x m
  MatrixXd normal;    // 2q x (2q - m)
  /// shape[alpha](a,b) = <h(e_a, e_b), nu_alpha>
  std::vector<MatrixXd> shape;
  CurvatureTensor ambient_R;  // ambient curvature pulled back to the tangent frame
  CurvatureTensor R;          // induced curvature (Gauss equation)
  CRSplit cr;
  VectorXd H;       // normal coordinates
  VectorXd H_D;
  VectorXd H_perp;

  int m() const { return static_cast<int>(tangent.cols()); }
  int codim() const { return static_cast<int>(normal.cols()); }
  /// h(v, w) in normal coordinates for tangent-coordinate vectors v, w.
  VectorXd h(const VectorXd& v, const VectorXd& w) const;
  /// Ambient vector of a normal-coordinate vector.
  VectorXd normal_vector(const VectorXd& coords) const { return normal * coords; }
};

/// Modified Gram-Schmidt with reorthogonalization on the columns of A.
/// Returns Q with orthonormal columns and upper-triangular Rf, A = Q Rf.
/// Throws ImmersionError when a pivot falls below `pivot_tol`.
void gram_schmidt(const MatrixXd& A, MatrixXd& Q, MatrixXd& Rf, double pivot_tol);

/// Largest deviation of F^T F from the identity.
double orthonormality_defect(const MatrixXd& F);

CRSplit cr_split(const AmbientSpace& amb, const MatrixXd& tangent, int declared_d, const ToleranceConfig& tol);

PointGeom point_geometry(const AmbientSpace& amb, const Chart& chart, std::span<const double> u,
                         const ToleranceConfig& tol = {});

/// H_V = sum_i h(v_i, v_i) over a tangent-coordinate frame (m x s).
VectorXd mean_curvature_vector(const PointGeom& geom, const MatrixXd& V, double tol = 1e-10);

/// Induced curvature from the metric alone: Christoffels by central
/// differences of g, curvature by central differences of the Christoffels.
/// Returned in the Gram-Schmidt tangent frame used by point_geometry.
CurvatureTensor intrinsic_curvature_fd(const Chart& chart, std::span<const double> u, double step = 1e-4);

}  // namespace crcurv
