#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "crcurv/errors.hpp"
#include "crcurv/invariants.hpp"
#include "support.hpp"

using namespace crcurv;

namespace {

InvariantConfig cfg_with_seed(std::uint64_t seed, long oracle = 0) {
  InvariantConfig c;
  c.opt.seed = seed;
  c.oracle_samples = oracle;
  return c;
}

double pair_sum(const std::vector<int>& n) {
  double s = 0;
  for (std::size_t i = 0; i < n.size(); ++i)
    for (std::size_t j = i + 1; j < n.size(); ++j) s += n[i] * n[j];
  return s;
}

/// A random unit vector of R^n.
VectorXd unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0, 1);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = N(rng);
  return v.normalized();
}

/// Random X, Y with span(X, JX) orthogonal to span(Y, JY).
std::pair<VectorXd, VectorXd> orthogonal_jplanes(const MatrixXd& J, std::mt19937_64& rng) {
  const int n = static_cast<int>(J.rows());
  const VectorXd X = unit(n, rng);
  VectorXd Y = unit(n, rng);
  for (const VectorXd& b : {X, VectorXd(J * X)}) Y -= Y.dot(b) * b;
  return {X, Y.normalized()};
}

MatrixXd plane(const VectorXd& X, const MatrixXd& phi) {
  MatrixXd P(X.size(), 2);
  P << X, phi * X;
  return P;
}

/// Extremes of the sectional curvature over all planes.
std::pair<double, double> sectional_bounds(const CurvatureTensor& R, std::uint64_t seed) {
  const int n = R.dim();
  const TupleObjective f = [&](const MatrixXd& C) { return R.sectional(VectorXd(C.col(0)), VectorXd(C.col(1))); };
  OptConfig cfg;
  cfg.seed = seed;
  return {minimize_over_flags(f, n, {1, 1}, cfg).value, maximize_over_flags(f, n, {1, 1}, cfg).value};
}

}  // namespace

TEST_CASE("tau_subspace") {
  for (int d = 2; d <= 6; ++d)
    CHECK(tau_subspace(constant_curvature_tensor(d, 1.0), MatrixXd::Identity(d, d)) == doctest::Approx(d * (d - 1.0)));
  const CurvatureTensor R = testing::random_bianchi(5, 1);
  CHECK(tau_subspace(R, testing::haar_frame(5, 1, 2)) == 0.0);
  CHECK_THROWS_AS(tau_subspace(R, 2 * testing::haar_frame(5, 2, 2)), NonOrthonormalFrame);
}

TEST_CASE("tau decomposition over orthogonal tuples") {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int d = 2; d <= 6; ++d)
    for (int k = 2; k <= 3; ++k)
      for (const auto& blocks : partitions_up_to(k, d))
        for (int t = 0; t < 3; ++t) {
          const CurvatureTensor R = testing::random_bianchi(d, rng());
          const SubspaceTuple tup = random_subspace_tuple(d, blocks, rng());
          double sum_tau = 0;
          for (int i = 0; i < tup.k(); ++i) sum_tau += tau_subspace(R, tup.block(i));
          CHECK(std::abs(tau_subspace(R, tup.C) - 2 * mutual_curvature(R, tup) - sum_tau) <= 1e-10);
          ++checked;
        }
  CHECK(checked > 50);
}

TEST_CASE("mutual_curvature") {
  const testing::Fixture s3(sphere_in_Cq(2, 1, 2));
  CHECK(mutual_curvature(s3.pa->R_D(), MatrixXd::Identity(2, 2), {1, 1}) == doctest::Approx(1.0));
  const CurvatureTensor R = testing::random_bianchi(5, 8);
  const MatrixXd F = testing::haar_frame(5, 4, 9);
  CHECK(std::abs(2 * mutual_curvature(R, F, {1, 1, 1, 1}) - tau_subspace(R, F)) <= 1e-10);
  const testing::Fixture torus(flat_torus(2));
  CHECK(std::abs(mutual_curvature(torus.pa->R_D(), MatrixXd::Identity(2, 2), {1, 1})) <= 1e-12);
  CHECK_THROWS_AS(mutual_curvature(R, F, {4}), BlockSizeError);
}

TEST_CASE("mixed_scalar_curvature") {
  CHECK(testing::Fixture(sphere_in_Cq(2, 1, 2)).pa->mixed_scalar() == doctest::Approx(2.0));
  CHECK(testing::Fixture(sphere_in_Cq(2, 2, 3)).pa->mixed_scalar() == doctest::Approx(4.0));
  CHECK(std::abs(testing::Fixture(flat_torus(2)).pa->mixed_scalar()) <= 1e-12);
  CHECK(std::abs(testing::Fixture(flat_torus(3)).pa->mixed_scalar()) <= 1e-12);
}

TEST_CASE("bisectional curvature: model values and errors") {
  const MatrixXd J = standard_complex_structure(2);
  const MatrixXd s1 = plane(VectorXd::Unit(4, 0), J), s2 = plane(VectorXd::Unit(4, 2), J);
  CHECK(bisectional_curvature(CurvatureTensor::zero(4), J, s1, s2) == 0.0);
  for (double c : {1.0, -2.0, 0.3}) {
    const CurvatureTensor R = complex_space_form_tensor(J, c);
    CHECK(bisectional_curvature(R, J, s1, s2) == doctest::Approx(2 * c));
    CHECK(bisectional_curvature(R, J, s1, s1) == doctest::Approx(4 * c));
  }
  MatrixXd bad(4, 2);
  bad << 1, 0, 0, 0, 0, 1, 0, 0;  // e1, e3: not J-invariant
  CHECK_THROWS_AS(bisectional_curvature(complex_space_form_tensor(J, 1), J, bad, s2), NotJInvariant);
}

TEST_CASE("bisectional curvature is invariant under in-plane rotation") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> A(0, 6.283185307179586);
  for (int n : {4, 6}) {
    const MatrixXd J = standard_complex_structure(n / 2);
    for (int t = 0; t < 50; ++t) {
      const CurvatureTensor R = testing::random_bianchi(n, rng());
      const auto [X, Y] = orthogonal_jplanes(J, rng);
      const double base = R.evaluate(X, J * X, J * Y, Y);
      const double a = A(rng), b = A(rng);
      const VectorXd X2 = std::cos(a) * X + std::sin(a) * J * X;
      const VectorXd Y2 = std::cos(b) * Y + std::sin(b) * J * Y;
      CHECK(std::abs(R.evaluate(X2, J * X2, J * Y2, Y2) - base) <= 1e-10);
      CHECK(std::abs(bisectional_curvature(R, J, plane(X, J), plane(Y2, J)) - base) <= 1e-10);
    }
  }
}

TEST_CASE("Kaehler test tensors have the claimed symmetries") {
  for (int n : {4, 6}) {
    const MatrixXd J = standard_complex_structure(n / 2);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const CurvatureTensor R = testing::random_kahler(n, s);
      CHECK(R.symmetry_residual() <= 1e-12);
      CHECK(R.bianchi_residual() <= 1e-12);
      const CurvatureTensor RJ = R.restricted(J.transpose());  // R(J e_a, J e_b, J e_c, J e_d)
      double diff = 0;
      for (std::size_t i = 0; i < R.components().size(); ++i)
        diff = std::max(diff, std::abs(RJ.components()[i] - R.components()[i]));
      CHECK(diff <= 1e-12);
      std::mt19937_64 rng(s);
      const VectorXd X = unit(n, rng), Y = unit(n, rng), Z = unit(n, rng), W = unit(n, rng);
      CHECK(std::abs(R.evaluate(J * X, J * Y, Z, W) - R.evaluate(X, Y, Z, W)) <= 1e-12);
    }
  }
}

TEST_CASE("holomorphic bisectional curvature expands into two sectional curvatures (Kaehler)") {
  std::mt19937_64 rng(21);
  for (int n : {4, 6}) {
    const MatrixXd J = standard_complex_structure(n / 2);
    for (int t = 0; t < 50; ++t) {
      const CurvatureTensor R = testing::random_kahler(n, rng());
      const auto [X, Y] = orthogonal_jplanes(J, rng);
      const VectorXd JY = J * Y;
      const double kh = R.evaluate(X, J * X, JY, Y);
      CHECK(std::abs(kh - (R.sectional(X, Y) + R.sectional(X, JY))) <= 1e-10);
    }
  }
}

TEST_CASE("S_h against S_m on J-planes") {
  std::mt19937_64 rng(31);
  for (int n : {4, 6}) {
    const MatrixXd J = standard_complex_structure(n / 2);
    for (int t = 0; t < 50; ++t) {
      const CurvatureTensor R = testing::random_kahler(n, rng());
      const int k = n / 2;
      const PlaneTuple P = random_plane_tuple(J, k, rng());
      CHECK(std::abs(2 * s_h(R, J, P) - mutual_curvature(R, P.frame(J), std::vector<int>(k, 2))) <= 1e-10);
    }
  }
  // Without the Kaehler symmetry the identity fails: a diagonal Gauss tensor has K_h = 0 but S_m != 0.
  MatrixXd B = MatrixXd::Zero(4, 4);
  B.diagonal() << 1, 0, 1, 0;
  const CurvatureTensor G = gauss_tensor({B});
  const MatrixXd J = standard_complex_structure(2);
  PlaneTuple P;
  P.X = MatrixXd::Identity(4, 4).leftCols(1);
  P.X.conservativeResize(4, 2);
  P.X.col(1) = VectorXd::Unit(4, 2);
  CHECK(std::abs(s_h(G, J, P)) <= 1e-14);
  CHECK(mutual_curvature(G, P.frame(J), {2, 2}) == doctest::Approx(1.0));

  const CurvatureTensor C = complex_space_form_tensor(J, 0.8);
  CHECK(s_h(C, J, P) == doctest::Approx(1.6));
  CHECK(s_h(CurvatureTensor::zero(4), J, P) == 0.0);
}

TEST_CASE("chen_delta") {
  const testing::Fixture s3(sphere_in_Cq(2, 1, 2));
  const ChenDelta k0 = chen_delta(s3.pa->R_D(), {}, cfg_with_seed(1));
  CHECK(2 * k0.delta == doctest::Approx(2.0));
  CHECK(s3.pa->tau_D() == doctest::Approx(2.0));
  for (int d = 2; d <= 5; ++d)
    for (int k = 1; k <= d; ++k)
      for (const auto& p : partitions_exact(k, d)) {
        const ChenDelta c = chen_delta(constant_curvature_tensor(d, 1.0), p, cfg_with_seed(2));
        double tri = 0;
        for (int n : p) tri += n * (n - 1.0);
        CHECK(c.delta == doctest::Approx((d * (d - 1.0) - tri) / 2));
      }
  for (std::uint64_t s = 0; s < 10; ++s) {
    const CurvatureTensor R = testing::random_bianchi(4, s);
    const ChenDelta c = chen_delta(R, {1, 2}, cfg_with_seed(s));
    CHECK(c.delta_hat <= c.delta + 1e-12);
  }
  CHECK_THROWS_AS(chen_delta(constant_curvature_tensor(3, 1), {2, 2}, cfg_with_seed(1)), BlockSizeError);
}

TEST_CASE("delta_m: curvature sandwich and full partitions") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const int d = 3 + static_cast<int>(s % 3);
    const CurvatureTensor R = testing::random_bianchi(d, 500 + s);
    const auto [lo, hi] = sectional_bounds(R, s);
    for (int k = 2; k <= 3; ++k)
      for (const auto& p : partitions_up_to(k, d)) {
        const double mx = delta_m(R, p, +1, cfg_with_seed(s)).value;
        const double mn = delta_m(R, p, -1, cfg_with_seed(s)).value;
        CHECK(mn <= mx + 1e-12);
        CHECK(mn >= lo * pair_sum(p) - 1e-6);
        CHECK(mx <= hi * pair_sum(p) + 1e-6);
        const int sum = std::accumulate(p.begin(), p.end(), 0);
        const ChenDelta c = chen_delta(R, p, cfg_with_seed(s));
        if (sum == d) {
          CHECK(std::abs(c.delta - mx) <= 1e-6);
          CHECK(std::abs(c.delta_hat - mn) <= 1e-6);
        } else {
          const ChenDelta whole = chen_delta(R, {sum}, cfg_with_seed(s));
          CHECK(mx >= c.delta - whole.delta - 1e-6);
          CHECK(mn <= c.delta_hat - whole.delta_hat + 1e-6);
        }
      }
  }
  CHECK(delta_m(CurvatureTensor::zero(4), {1, 2}, +1, cfg_with_seed(0)).value == 0.0);
  CHECK_THROWS_AS(delta_m(CurvatureTensor::zero(4), {4}, +1, cfg_with_seed(0)), BlockSizeError);
}

TEST_CASE("ordering under a sign condition on sectional curvature") {
  // Positive semidefinite Gauss tensors have K >= 0.
  std::mt19937_64 rng(40);
  for (int t = 0; t < 6; ++t) {
    const int d = 4;
    MatrixXd A = testing::random_symmetric(d, rng);
    A = A * A.transpose();
    MatrixXd B = testing::random_symmetric(d, rng);
    B = B * B.transpose() * 0.5;
    const CurvatureTensor R = gauss_tensor({A}) + gauss_tensor({B}) + constant_curvature_tensor(d, 0.2);
    for (int k = 2; k <= 3; ++k)
      for (const auto& p : partitions_up_to(k, d)) {
        const InvariantConfig cfg = cfg_with_seed(t);
        const double mx = delta_m(R, p, +1, cfg).value, mn = delta_m(R, p, -1, cfg).value;
        const ChenDelta c = chen_delta(R, p, cfg);
        CHECK(mn <= mx + 1e-9);
        CHECK(mx <= c.delta + 1e-6);
        const ChenDelta cn = chen_delta(-R, p, cfg);
        CHECK(-mn >= cn.delta - 1e-6);  // reversed for K <= 0
        if (std::accumulate(p.begin(), p.end(), 0) == d) CHECK(c.delta_hat <= mn + 1e-6);
      }
  }
  // The first link of the chain needs sum n_i = d: constant curvature 1, d = 4, (1,1).
  const CurvatureTensor S = constant_curvature_tensor(4, 1.0);
  CHECK(chen_delta(S, {1, 1}, cfg_with_seed(1)).delta_hat == doctest::Approx(6.0));
  CHECK(delta_m(S, {1, 1}, -1, cfg_with_seed(1)).value == doctest::Approx(1.0));
}

TEST_CASE("sign flip duality") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const CurvatureTensor R = testing::random_kahler(4, 70 + s);
    const MatrixXd J = standard_complex_structure(2);
    const InvariantConfig cfg = cfg_with_seed(s);
    CHECK(delta_m(R, {1, 2}, -1, cfg).value == doctest::Approx(-delta_m(-R, {1, 2}, +1, cfg).value).epsilon(1e-9));
    CHECK(delta_m_aggregate(R, 2, -1, cfg).value ==
          doctest::Approx(-delta_m_aggregate(-R, 2, +1, cfg).value).epsilon(1e-9));
    CHECK(delta_h(R, J, 2, -1, cfg).value == doctest::Approx(-delta_h(-R, J, 2, +1, cfg).value).epsilon(1e-9));
    const ChenDelta a = chen_delta(R, {1, 1}, cfg), b = chen_delta(-R, {1, 1}, cfg);
    CHECK(a.delta == doctest::Approx(-b.delta_hat).epsilon(1e-9));
  }
}

TEST_CASE("delta_m_aggregate") {
  const InvariantValue v = delta_m_aggregate(constant_curvature_tensor(4, 1.0), 2, +1, cfg_with_seed(0));
  CHECK(v.value == doctest::Approx(4.0));
  CHECK(v.blocks == std::vector<int>{2, 2});
  CHECK(partitions_up_to(2, 4) == std::vector<std::vector<int>>{{1, 1}, {1, 2}, {1, 3}, {2, 2}});
  CHECK(delta_m_aggregate(CurvatureTensor::zero(4), 3, +1, cfg_with_seed(0)).value == 0.0);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const CurvatureTensor R = testing::random_bianchi(4, 90 + s);
    CHECK(delta_m_aggregate(R, 2, -1, cfg_with_seed(s)).value <= delta_m_aggregate(R, 2, +1, cfg_with_seed(s)).value);
  }
  CHECK_THROWS_AS(delta_m_aggregate(CurvatureTensor::zero(3), 4, +1, cfg_with_seed(0)), BlockSizeError);
}

TEST_CASE("delta_h") {
  for (int d : {4, 6}) {
    const MatrixXd J = standard_complex_structure(d / 2);
    for (std::uint64_t s = 0; s < 4; ++s) {
      const CurvatureTensor R = testing::random_kahler(d, 120 + s);
      for (int k = 2; 2 * k <= d; ++k) {
        const InvariantConfig cfg = cfg_with_seed(s);
        const std::vector<int> twos(k, 2);
        CHECK(2 * delta_h(R, J, k, +1, cfg).value <= delta_m(R, twos, +1, cfg).value + 1e-6);
        CHECK(2 * delta_h(R, J, k, -1, cfg).value >= delta_m(R, twos, -1, cfg).value - 1e-6);
      }
    }
  }
  const MatrixXd J = standard_complex_structure(2);
  CHECK(delta_h(complex_space_form_tensor(J, 1.5), J, 2, +1, cfg_with_seed(0)).value == doctest::Approx(3.0));
  CHECK(delta_h(CurvatureTensor::zero(4), J, 2, +1, cfg_with_seed(0)).value == 0.0);
  CHECK_THROWS_AS(delta_h(CurvatureTensor::zero(4), J, 3, +1, cfg_with_seed(0)), BlockSizeError);
}

TEST_CASE("script_H") {
  const testing::Fixture s3(sphere_in_Cq(2, 1, 2));
  CHECK(s3.pa->script_H(2).value == doctest::Approx(2.0));
  CHECK(s3.pa->script_H(1).value == doctest::Approx(1.0));
  const testing::Fixture s5(sphere_in_Cq(4, 1, 3));
  for (int s = 1; s <= 4; ++s) CHECK(s5.pa->script_H(s).value == doctest::Approx(s).epsilon(1e-9));
  const testing::Fixture tg(totally_geodesic_plane(4, 1, 3));
  for (int s = 1; s <= 4; ++s) CHECK(tg.pa->script_H(s).value <= 1e-12);
  CHECK_THROWS_AS(script_H(s3.pa->shape_D(), 2, 3, cfg_with_seed(0)), BlockSizeError);
}

TEST_CASE("normalized delta") {
  CHECK(normalized_delta(constant_curvature_tensor(3, 1.0), {1, 1}, cfg_with_seed(0)) == doctest::Approx(4.0));
  CHECK(normalized_delta(CurvatureTensor::zero(3), {1, 1}, cfg_with_seed(0)) == 0.0);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const CurvatureTensor R = testing::random_bianchi(5, 200 + s);
    for (int sum = 2; sum <= 5; ++sum) {
      const double bar = normalized_delta_bar(R, sum, cfg_with_seed(s)).value;
      for (int k = 2; k <= sum; ++k)
        for (const auto& p : partitions_exact(k, sum)) CHECK(bar >= normalized_delta(R, p, cfg_with_seed(s)) - 1e-6);
    }
  }
}
