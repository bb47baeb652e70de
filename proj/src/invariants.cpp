#include "crcurv/invariants.hpp"

#include <cmath>
#include <string>

#include "crcurv/errors.hpp"

namespace crcurv {

namespace {

void require_orthonormal(const MatrixXd& V, double tol = 1e-8) {
  if (V.cols() == 0) return;
  const MatrixXd G = V.transpose() * V - MatrixXd::Identity(V.cols(), V.cols());
  if (G.cwiseAbs().maxCoeff() > tol) throw NonOrthonormalFrame("frame is not orthonormal");
}

void require_dim(const CurvatureTensor& R, const MatrixXd& V) {
  if (V.rows() != R.dim()) throw DimensionError("frame rows do not match the curvature tensor");
}

double block_tau(const CurvatureTensor& R, const MatrixXd& C, int begin, int count) {
  const double* base = C.data();
  const Eigen::Index n = C.rows();
  double acc = 0.0;
  for (int a = begin; a < begin + count; ++a)
    for (int b = a + 1; b < begin + count; ++b) acc += R.sectional(base + a * n, base + b * n);
  return 2.0 * acc;
}

double mutual_unchecked(const CurvatureTensor& R, const MatrixXd& C, const std::vector<int>& blocks) {
  const double* base = C.data();
  const Eigen::Index n = C.rows();
  double acc = 0.0;
  int oi = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    int oj = oi + blocks[i];
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      for (int a = oi; a < oi + blocks[i]; ++a)
        for (int b = oj; b < oj + blocks[j]; ++b) acc += R.sectional(base + a * n, base + b * n);
      oj += blocks[j];
    }
    oi += blocks[i];
  }
  return acc;
}

void certify(InvariantValue& v, int sign, int d, const TupleObjective& f, const std::vector<int>* blocks,
             const MatrixXd* phi, int k, const InvariantConfig& cfg) {
  if (cfg.oracle_samples <= 0 || d > cfg.certify_max_d) return;
  const std::uint64_t seed = mix_seed(cfg.opt.seed, 0x6f7261636c65ULL);
  const OracleResult o = blocks ? brute_force_oracle(f, d, *blocks, cfg.oracle_samples, seed)
                                : brute_force_oracle(f, d, k, *phi, cfg.oracle_samples, seed);
  v.gap = sign > 0 ? o.max - v.value : v.value - o.min;
}

InvariantValue from_opt(const OptResult& r) {
  InvariantValue v;
  v.value = r.value;
  v.tuple = r.tuple;
  v.planes = r.planes;
  v.blocks = r.tuple.blocks;
  v.restarts_used = r.restarts_used;
  v.sweeps = r.sweeps;
  return v;
}

void partitions_rec(int k, int min_part, int remaining, bool exact, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (k == 0) {
    if (!exact || remaining == 0) out.push_back(cur);
    return;
  }
  for (int n = min_part; n * k <= remaining; ++n) {
    cur.push_back(n);
    partitions_rec(k - 1, n, remaining - n, exact, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double tau_subspace(const CurvatureTensor& R, const MatrixXd& V) {
  require_dim(R, V);
  require_orthonormal(V);
  return block_tau(R, V, 0, static_cast<int>(V.cols()));
}

double mutual_curvature(const CurvatureTensor& R, const MatrixXd& C, const std::vector<int>& blocks) {
  require_dim(R, C);
  if (blocks.size() < 2) throw BlockSizeError("mutual curvature needs k >= 2 blocks");
  if (validate_blocks(static_cast<int>(C.rows()), blocks) != C.cols())
    throw BlockSizeError("block sizes do not match the frame");
  require_orthonormal(C);
  return mutual_unchecked(R, C, blocks);
}

double mutual_curvature(const CurvatureTensor& R, const SubspaceTuple& t) { return mutual_curvature(R, t.C, t.blocks); }

double mixed_scalar_curvature(const CurvatureTensor& R, const MatrixXd& D, const MatrixXd& P) {
  require_dim(R, D);
  require_dim(R, P);
  MatrixXd both(D.rows(), D.cols() + P.cols());
  both << D, P;
  require_orthonormal(both);
  double acc = 0.0;
  for (Eigen::Index a = 0; a < D.cols(); ++a)
    for (Eigen::Index b = 0; b < P.cols(); ++b) acc += R.sectional(VectorXd(D.col(a)), VectorXd(P.col(b)));
  return acc;
}

double bisectional_curvature(const CurvatureTensor& R, const MatrixXd& phi, const MatrixXd& sigma,
                             const MatrixXd& sigma_prime, double tol) {
  auto unit_in = [&](const MatrixXd& S) {
    if (S.rows() != R.dim() || S.cols() != 2) throw DimensionError("a plane is given by an n x 2 spanning matrix");
    MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(S).householderQ() * MatrixXd::Identity(S.rows(), 2);
    const MatrixXd image = phi * Q;
    if ((image - Q * (Q.transpose() * image)).norm() > tol) throw NotJInvariant("plane is not phi-invariant");
    return VectorXd(Q.col(0));
  };
  const VectorXd X = unit_in(sigma), Y = unit_in(sigma_prime);
  return R.pairing(X, VectorXd(phi * X), Y, VectorXd(phi * Y));
}

double s_h_unchecked(const CurvatureTensor& R, const MatrixXd& phi, const MatrixXd& X) {
  const MatrixXd PX = phi * X;
  const Eigen::Index n = X.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    for (Eigen::Index j = i + 1; j < X.cols(); ++j)
      acc += R.pairing(X.data() + i * n, PX.data() + i * n, X.data() + j * n, PX.data() + j * n);
  return acc;
}

double s_h(const CurvatureTensor& R, const MatrixXd& phi, const PlaneTuple& planes) {
  require_dim(R, planes.X);
  if (planes.k() < 2) throw BlockSizeError("S_h needs k >= 2 planes");
  const MatrixXd F = planes.frame(phi);
  require_orthonormal(F);
  return s_h_unchecked(R, phi, planes.X);
}

double sum_block_tau(const CurvatureTensor& R, const MatrixXd& C, const std::vector<int>& blocks) {
  double acc = 0.0;
  int o = 0;
  for (int n : blocks) {
    acc += block_tau(R, C, o, n);
    o += n;
  }
  return acc;
}

ChenDelta chen_delta(const CurvatureTensor& R, const std::vector<int>& blocks, const InvariantConfig& cfg) {
  const int d = R.dim();
  const double tau_D = block_tau(R, MatrixXd::Identity(d, d), 0, d);
  ChenDelta out;
  if (blocks.empty()) {
    out.delta = out.delta_hat = tau_D / 2;
    return out;
  }
  validate_blocks(d, blocks);
  const TupleObjective f = [&](const MatrixXd& C) { return sum_block_tau(R, C, blocks); };
  out.min_tau = from_opt(minimize_over_flags(f, d, blocks, cfg.opt));
  out.max_tau = from_opt(maximize_over_flags(f, d, blocks, cfg.opt));
  certify(out.min_tau, -1, d, f, &blocks, nullptr, 0, cfg);
  certify(out.max_tau, +1, d, f, &blocks, nullptr, 0, cfg);
  out.delta = (tau_D - out.min_tau.value) / 2;
  out.delta_hat = (tau_D - out.max_tau.value) / 2;
  return out;
}

InvariantValue delta_m(const CurvatureTensor& R, const std::vector<int>& blocks, int sign, const InvariantConfig& cfg) {
  const int d = R.dim();
  if (blocks.size() < 2) throw BlockSizeError("mutual curvature invariants need k >= 2");
  validate_blocks(d, blocks);
  const TupleObjective f = [&](const MatrixXd& C) { return mutual_unchecked(R, C, blocks); };
  InvariantValue v = from_opt(sign > 0 ? maximize_over_flags(f, d, blocks, cfg.opt)
                                       : minimize_over_flags(f, d, blocks, cfg.opt));
  certify(v, sign, d, f, &blocks, nullptr, 0, cfg);
  return v;
}

std::vector<std::vector<int>> partitions_up_to(int k, int max_sum) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (k >= 1) partitions_rec(k, 1, max_sum, false, cur, out);
  return out;
}

std::vector<std::vector<int>> partitions_exact(int k, int sum) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (k >= 1) partitions_rec(k, 1, sum, true, cur, out);
  return out;
}

InvariantValue delta_m_aggregate(const CurvatureTensor& R, int k, int sign, const InvariantConfig& cfg) {
  if (k < 2 || k > R.dim()) throw BlockSizeError("aggregate needs 2 <= k <= d");
  std::optional<InvariantValue> best;
  for (const auto& p : partitions_up_to(k, R.dim())) {
    InvariantValue v = delta_m(R, p, sign, cfg);
    if (!best || (sign > 0 ? v.value > best->value : v.value < best->value)) best = std::move(v);
  }
  return *best;
}

InvariantValue delta_h(const CurvatureTensor& R, const MatrixXd& phi, int k, int sign, const InvariantConfig& cfg) {
  const int d = R.dim();
  if (k < 2 || 2 * k > d) throw BlockSizeError("holomorphic invariants need 2 <= k <= d/2");
  const TupleObjective f = [&](const MatrixXd& X) { return s_h_unchecked(R, phi, X); };
  InvariantValue v = from_opt(sign > 0 ? maximize_over_plane_tuples(f, d, k, phi, cfg.opt)
                                       : minimize_over_plane_tuples(f, d, k, phi, cfg.opt));
  certify(v, sign, d, f, nullptr, &phi, k, cfg);
  return v;
}

InvariantValue script_H(const std::vector<MatrixXd>& forms, int d, int s, const InvariantConfig& cfg) {
  if (s < 1 || s > d) throw BlockSizeError("script_H needs 1 <= s <= d");
  auto norm_H = [&](const MatrixXd& C) {
    double acc = 0.0;
    for (const auto& S : forms) {
      const double t = (C.transpose() * S * C).trace();
      acc += t * t;
    }
    return std::sqrt(acc);
  };
  if (s == d) {
    InvariantValue v;
    v.blocks = {d};
    v.tuple.blocks = {d};
    v.tuple.C = MatrixXd::Identity(d, d);
    v.value = norm_H(v.tuple.C);
    return v;
  }
  const std::vector<int> blocks{s};
  InvariantValue v = from_opt(maximize_over_flags(norm_H, d, blocks, cfg.opt));
  certify(v, +1, d, norm_H, &blocks, nullptr, 0, cfg);
  return v;
}

double normalized_delta(const CurvatureTensor& R, const std::vector<int>& blocks, const InvariantConfig& cfg) {
  const double k = static_cast<double>(blocks.size());
  return 2 * k / (k - 1) * delta_m(R, blocks, +1, cfg).value;
}

InvariantValue normalized_delta_bar(const CurvatureTensor& R, int s, const InvariantConfig& cfg) {
  if (s < 2 || s > R.dim()) throw BlockSizeError("normalized aggregate needs 2 <= s <= d");
  std::optional<InvariantValue> best;
  for (int k = 2; k <= s; ++k)
    for (const auto& p : partitions_exact(k, s)) {
      InvariantValue v = delta_m(R, p, +1, cfg);
      v.value *= 2.0 * k / (k - 1);
      if (!best || v.value > best->value) best = std::move(v);
    }
  return *best;
}

}  // namespace crcurv
