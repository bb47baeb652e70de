#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crcurv/expr.hpp"

namespace crcurv {

/// A parametric immersion u -> F(u) of a parameter box into C^q, with the
/// CR dimensions (d, l) it is declared to have.
struct Chart {
  std::string name;
  int d = 0;
  int l = 0;
  std::vector<Expression> components;             // 2q entries over u1..u_{d+l}
  std::vector<std::pair<double, double>> domain;  // per-variable closed interval

  int m() const { return d + l; }
  int ambient_dim() const { return static_cast<int>(components.size()); }
  Eigen::VectorXd center() const;
  bool contains(std::span<const double> u, double margin = 0.0) const;
};

/// Builds a chart from expression strings; throws the parser's errors.
Chart make_chart(std::string name, int d, int l, const std::vector<std::string>& components,
                 std::vector<std::pair<double, double>> domain);

/// F(u), dF (2q x m) and the second derivatives d2F[i*m + j] (2q-vectors).
struct ChartJets {
  Eigen::VectorXd value;
  Eigen::MatrixXd jacobian;
  std::vector<Eigen::VectorXd> hessian;
};

ChartJets evaluate_chart(const Chart& chart, std::span<const double> u);

}  // namespace crcurv
