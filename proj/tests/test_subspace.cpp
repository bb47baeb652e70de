#include <doctest.h>

#include <cmath>
#include <limits>

#include "crcurv/errors.hpp"
#include "crcurv/invariants.hpp"
#include "crcurv/subspace.hpp"
#include "support.hpp"

using namespace crcurv;

namespace {

double pair_sum(const std::vector<int>& n) {
  double s = 0;
  for (std::size_t i = 0; i < n.size(); ++i)
    for (std::size_t j = i + 1; j < n.size(); ++j) s += n[i] * n[j];
  return s;
}

double defect(const MatrixXd& F) {
  return (F.transpose() * F - MatrixXd::Identity(F.cols(), F.cols())).cwiseAbs().maxCoeff();
}

TupleObjective mutual(const CurvatureTensor& R, std::vector<int> blocks) {
  return [&R, blocks](const MatrixXd& C) { return mutual_curvature(R, C, blocks); };
}

}  // namespace

TEST_CASE("random_subspace_tuple") {
  const SubspaceTuple a = random_subspace_tuple(4, {2, 2}, 0);
  const SubspaceTuple b = random_subspace_tuple(4, {2, 2}, 0);
  CHECK(a.C == b.C);
  CHECK(a.s() == 4);
  CHECK(a.k() == 2);
  CHECK(defect(a.C) <= 1e-12);
  CHECK(!(random_subspace_tuple(4, {2, 2}, 1).C == a.C));
  CHECK_THROWS_AS(random_subspace_tuple(3, {2, 2}, 0), BlockSizeError);
  CHECK_THROWS_AS(random_subspace_tuple(3, {0, 2}, 0), BlockSizeError);
  CHECK_THROWS_AS(random_subspace_tuple(3, {}, 0), BlockSizeError);
}

TEST_CASE("random_subspace_tuple: Haar second moments") {
  // For Haar-uniform unit vectors in R^3, <x, y>^2 has mean 1/3 for any fixed or independent y.
  double fixed = 0, indep = 0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    const MatrixXd C = random_subspace_tuple(3, {1, 1}, t).C;
    const MatrixXd D = random_subspace_tuple(3, {1, 1}, t + n).C;
    fixed += C(0, 0) * C(0, 0);
    indep += std::pow(C.col(0).dot(D.col(0)), 2);
    CHECK(std::abs(C.col(0).dot(C.col(1))) <= 1e-12);
  }
  CHECK(std::abs(fixed / n - 1.0 / 3) <= 0.02);
  CHECK(std::abs(indep / n - 1.0 / 3) <= 0.02);
}

TEST_CASE("maximize_over_flags: constant curvature and zero tensor") {
  for (double c : {1.0, -0.5, 2.0}) {
    for (const auto& blocks : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {2, 2}, {1, 1, 1}, {1, 1, 2}}) {
      const CurvatureTensor R = constant_curvature_tensor(5, c);
      OptConfig cfg;
      cfg.seed = 3;
      const OptResult r = maximize_over_flags(mutual(R, blocks), 5, blocks, cfg);
      CHECK(r.value == doctest::Approx(c * pair_sum(blocks)).epsilon(1e-12));
      const OracleResult o = brute_force_oracle(mutual(R, blocks), 5, blocks, 2000, 4);
      CHECK(std::abs(o.max - c * pair_sum(blocks)) <= 1e-9);
      CHECK(std::abs(o.min - c * pair_sum(blocks)) <= 1e-9);
    }
  }
  const CurvatureTensor Z = CurvatureTensor::zero(4);
  const OptResult r = maximize_over_flags(mutual(Z, {1, 1}), 4, {1, 1}, OptConfig{});
  CHECK(r.value == 0.0);
  CHECK(r.restarts_used == 1);
  CHECK(r.sweeps == 1);
  const OracleResult o = brute_force_oracle(mutual(Z, {1, 1}), 4, {1, 1}, 1000, 1);
  CHECK(o.max == 0.0);
  CHECK(o.min == 0.0);
}

TEST_CASE("maximize_over_flags: random tensor against the oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CurvatureTensor R = testing::random_bianchi(4, 1000 + seed);
    OptConfig cfg;
    cfg.seed = seed;
    const auto f = mutual(R, {1, 1});
    const OptResult mx = maximize_over_flags(f, 4, {1, 1}, cfg);
    const OptResult mn = minimize_over_flags(f, 4, {1, 1}, cfg);
    const OracleResult o = brute_force_oracle(f, 4, {1, 1}, 100000, seed + 7);
    CHECK(std::abs(mx.value - o.max) <= 1e-3);
    CHECK(std::abs(mn.value - o.min) <= 1e-3);
    CHECK(mx.value >= o.max - 1e-3);
    CHECK(mx.value <= o.max + 1e-6 + 1e-3);
    CHECK(defect(mx.tuple.C) <= 1e-10);
    CHECK(f(mx.tuple.C) == doctest::Approx(mx.value).epsilon(1e-12));
  }
}

TEST_CASE("flags: minimize is the negated maximization") {
  const CurvatureTensor R = testing::random_bianchi(5, 77);
  OptConfig cfg;
  cfg.seed = 9;
  const auto f = mutual(R, {2, 1});
  const auto g = [&](const MatrixXd& C) { return -f(C); };
  CHECK(minimize_over_flags(f, 5, {2, 1}, cfg).value == doctest::Approx(-maximize_over_flags(g, 5, {2, 1}, cfg).value));
}

TEST_CASE("flags: feasibility of every evaluated tuple") {
  const CurvatureTensor R = testing::random_bianchi(5, 5);
  double worst = 0.0;
  const TupleObjective f = [&](const MatrixXd& C) {
    worst = std::max(worst, defect(C));
    return mutual_curvature(R, C, {1, 2, 2});
  };
  OptConfig cfg;
  cfg.restarts = 4;
  maximize_over_flags(f, 5, {1, 2, 2}, cfg);
  CHECK(worst <= 1e-10);
}

TEST_CASE("flags: more restarts never lower the maximum") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const CurvatureTensor R = testing::random_bianchi(5, 50 + seed);
    const auto f = mutual(R, {1, 2});
    double prev = -std::numeric_limits<double>::infinity();
    for (int r : {1, 2, 4, 8, 16}) {
      OptConfig cfg;
      cfg.restarts = r;
      cfg.seed = seed;
      const double v = maximize_over_flags(f, 5, {1, 2}, cfg).value;
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("flags: mutual curvature is invariant under rotations within a block") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CurvatureTensor R = testing::random_bianchi(6, 300 + seed);
    const std::vector<int> blocks = {2, 3, 1};
    SubspaceTuple t = random_subspace_tuple(6, blocks, seed);
    const double before = mutual_curvature(R, t);
    const MatrixXd Q = testing::haar_frame(3, 3, seed + 99);
    t.C.middleCols(2, 3) = t.C.middleCols(2, 3) * Q;
    CHECK(std::abs(mutual_curvature(R, t) - before) <= 1e-9);
  }
}

TEST_CASE("flags: non-finite objective") {
  const TupleObjective f = [](const MatrixXd&) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(maximize_over_flags(f, 3, {1, 1}, OptConfig{}), ObjectiveError);
}

TEST_CASE("plane tuples") {
  const MatrixXd J = standard_complex_structure(2);
  for (double c : {1.0, -0.7}) {
    const CurvatureTensor R = complex_space_form_tensor(J, c);
    const TupleObjective f = [&](const MatrixXd& X) { return s_h_unchecked(R, J, X); };
    const OptResult r = maximize_over_plane_tuples(f, 4, 2, J, OptConfig{});
    CHECK(r.value == doctest::Approx(2 * c));
    const MatrixXd F = r.planes.frame(J);
    CHECK(defect(F) <= 1e-10);
  }
  const CurvatureTensor Z = CurvatureTensor::zero(4);
  const TupleObjective fz = [&](const MatrixXd& X) { return s_h_unchecked(Z, J, X); };
  CHECK(maximize_over_plane_tuples(fz, 4, 2, J, OptConfig{}).value == 0.0);
  CHECK_THROWS_AS(maximize_over_plane_tuples(fz, 4, 3, J, OptConfig{}), BlockSizeError);

  MatrixXd X(4, 2);
  X.col(0) = VectorXd::Unit(4, 0);
  X.col(1) = J * X.col(0);  // same plane twice
  CHECK_THROWS_AS(project_plane_tuple(X, J), FeasibilityError);
}

TEST_CASE("plane tuples: random Kaehler tensor against the oracle") {
  const MatrixXd J = standard_complex_structure(3);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const CurvatureTensor R = testing::random_kahler(6, 60 + seed);
    const TupleObjective f = [&](const MatrixXd& X) { return s_h_unchecked(R, J, X); };
    OptConfig cfg;
    cfg.seed = seed;
    const OptResult mx = maximize_over_plane_tuples(f, 6, 2, J, cfg);
    const OracleResult o = brute_force_oracle(f, 6, 2, J, 20000, seed);
    CHECK(std::abs(mx.value - o.max) <= 1e-3);
    CHECK(mx.value >= o.max - 1e-3);
    const MatrixXd F = mx.planes.frame(J);
    CHECK(defect(F) <= 1e-10);
  }
}
