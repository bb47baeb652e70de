#pragma once

#include <Eigen/Dense>

#include "crcurv/tensor.hpp"

namespace crcurv {

enum class CurvatureModel { Flat, ConstHolomorphic };

/// Model ambient C^q (real dimension 2q) with a complex structure and a
/// closed-form curvature tensor.
class AmbientSpace {
 public:
  AmbientSpace() = default;
  AmbientSpace(int q, CurvatureModel model, double c);

  int q() const { return q_; }
  int dim() const { return 2 * q_; }
  CurvatureModel model() const { return model_; }
  /// Holomorphic sectional curvature is 4c; zero for the flat model.
  double c() const { return c_; }
  bool flat() const { return model_ == CurvatureModel::Flat || c_ == 0.0; }
  const MatrixXd& J() const { return J_; }
  const CurvatureTensor& curvature() const { return R_; }

  /// Sectional curvature range [lo, hi] of the model.
  std::pair<double, double> sectional_range() const;

 private:
  int q_ = 0;
  CurvatureModel model_ = CurvatureModel::Flat;
  double c_ = 0.0;
  MatrixXd J_;
  CurvatureTensor R_;
};

/// J e_{2i} = e_{2i+1}, J e_{2i+1} = -e_{2i} (zero-based), i.e. coordinate
/// 2i-1 paired with 2i in one-based numbering.
MatrixXd standard_complex_structure(int q);

AmbientSpace make_flat_complex_ambient(int q);
AmbientSpace make_const_holomorphic_ambient(int q, double c);

/// R(X,Y,Z,W) of the ambient model.
double ambient_curvature(const AmbientSpace& amb, const VectorXd& X, const VectorXd& Y, const VectorXd& Z,
                         const VectorXd& W);

}  // namespace crcurv
