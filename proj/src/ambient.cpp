#include "crcurv/ambient.hpp"

#include <algorithm>

#include "crcurv/errors.hpp"

namespace crcurv {

MatrixXd standard_complex_structure(int q) {
  MatrixXd J = MatrixXd::Zero(2 * q, 2 * q);
  for (int i = 0; i < q; ++i) {
    J(2 * i + 1, 2 * i) = 1.0;
    J(2 * i, 2 * i + 1) = -1.0;
  }
  return J;
}

AmbientSpace::AmbientSpace(int q, CurvatureModel model, double c)
    : q_(q), model_(model), c_(model == CurvatureModel::Flat ? 0.0 : c), J_(standard_complex_structure(q)) {
  if (q < 1) throw DimensionError("ambient needs q >= 1");
  R_ = flat() ? CurvatureTensor::zero(2 * q) : complex_space_form_tensor(J_, c_);
}

std::pair<double, double> AmbientSpace::sectional_range() const {
  if (flat()) return {0.0, 0.0};
  // K(X,Y) = c(1 + 3<JX,Y>^2); a single complex line only has holomorphic planes.
  if (q_ == 1) return {4 * c_, 4 * c_};
  return {std::min(c_, 4 * c_), std::max(c_, 4 * c_)};
}

AmbientSpace make_flat_complex_ambient(int q) { return AmbientSpace(q, CurvatureModel::Flat, 0.0); }

AmbientSpace make_const_holomorphic_ambient(int q, double c) {
  return AmbientSpace(q, CurvatureModel::ConstHolomorphic, c);
}

double ambient_curvature(const AmbientSpace& amb, const VectorXd& X, const VectorXd& Y, const VectorXd& Z,
                         const VectorXd& W) {
  return amb.curvature().evaluate(X, Y, Z, W);
}

}  // namespace crcurv
