#pragma once

#include <memory>
#include <random>
#include <vector>

#include "crcurv/analysis.hpp"
#include "crcurv/catalog.hpp"
#include "crcurv/geometry.hpp"
#include "crcurv/invariants.hpp"
#include "crcurv/tensor.hpp"

namespace testing {

using crcurv::CurvatureTensor;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = N(rng);
  return 0.5 * (A + A.transpose());
}

/// Signed sum of Gauss tensors of random symmetric forms: all algebraic
/// curvature symmetries, indefinite sectional curvature.
inline CurvatureTensor random_bianchi(int n, std::uint64_t seed, int terms = 3) {
  std::mt19937_64 rng(seed);
  CurvatureTensor R = CurvatureTensor::zero(n);
  for (int t = 0; t < terms; ++t) {
    const CurvatureTensor G = crcurv::gauss_tensor({random_symmetric(n, rng) * 0.5});
    R = t % 2 == 0 ? R + G : R + (-G);
  }
  return R;
}

/// Random tensor with the Kaehler symmetry R(JX,JY,Z,W) = R(X,Y,Z,W) for the
/// standard J on R^n: Gauss tensors of (Re A, Im A) for complex symmetric A,
/// with mixed signs, plus a complex space form term.
inline CurvatureTensor random_kahler(int n, std::uint64_t seed, int terms = 3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  const MatrixXd J = crcurv::standard_complex_structure(n / 2);
  CurvatureTensor R = crcurv::complex_space_form_tensor(J, N(rng));
  for (int t = 0; t < terms; ++t) {
    // B1 anti-commutes with J and is symmetric; B2 = B1 J is then symmetric too.
    MatrixXd S = random_symmetric(n, rng) * 0.5;
    const MatrixXd B1 = 0.5 * (S + J * S * J);
    const MatrixXd B2 = B1 * J;
    const CurvatureTensor G = crcurv::gauss_tensor({B1, B2});
    R = t % 2 == 0 ? R + G : R + (-G);
  }
  return R;
}

inline MatrixXd haar_frame(int d, int s, std::uint64_t seed) {
  return crcurv::random_subspace_tuple(d, {s}, seed).C;
}

/// Everything needed to run invariants and checks at one catalog point.
struct Fixture {
  crcurv::CatalogEntry entry;
  std::unique_ptr<crcurv::AmbientInvariants> amb;
  std::unique_ptr<crcurv::PointAnalysis> pa;
  crcurv::ToleranceConfig tol;

  Fixture(crcurv::CatalogEntry e, const VectorXd& u, std::uint64_t seed = 1, long oracle = 0)
      : entry(std::move(e)) {
    crcurv::InvariantConfig cfg;
    cfg.oracle_samples = oracle;
    amb = std::make_unique<crcurv::AmbientInvariants>(entry.ambient, cfg);
    auto g = crcurv::point_geometry(entry.ambient, entry.chart, std::span<const double>(u.data(), u.size()), tol);
    pa = std::make_unique<crcurv::PointAnalysis>(std::move(g), *amb, cfg, seed);
  }
  explicit Fixture(crcurv::CatalogEntry e) : Fixture(e, e.chart.center()) {}
};

}  // namespace testing
