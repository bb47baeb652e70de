#include "crcurv/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "crcurv/errors.hpp"

namespace crcurv {

namespace {

struct TupleDiagnostics {
  double mixed = 0.0;   // max ||h(x, y)|| for x, y in different blocks
  double spread = 0.0;  // max ||H_i - H_j||
};

TupleDiagnostics tuple_diagnostics(const PointAnalysis& pa, const MatrixXd& C, const std::vector<int>& blocks) {
  TupleDiagnostics out;
  std::vector<int> owner;
  for (std::size_t i = 0; i < blocks.size(); ++i) owner.insert(owner.end(), blocks[i], static_cast<int>(i));
  for (Eigen::Index a = 0; a < C.cols(); ++a)
    for (Eigen::Index b = a + 1; b < C.cols(); ++b)
      if (owner[a] != owner[b]) out.mixed = std::max(out.mixed, pa.h_D(C.col(a), C.col(b)).norm());
  std::vector<VectorXd> H;
  int o = 0;
  for (int n : blocks) {
    H.push_back(pa.H_of(C.middleCols(o, n)));
    o += n;
  }
  for (std::size_t i = 0; i < H.size(); ++i)
    for (std::size_t j = i + 1; j < H.size(); ++j) out.spread = std::max(out.spread, (H[i] - H[j]).norm());
  return out;
}

void finalize(InequalityReport& r, const PointAnalysis& pa, const ToleranceConfig& tol) {
  r.u = pa.geom().u;
  r.slack = r.rhs - r.lhs;
  r.pass = r.slack >= -tol.slack;
  r.equality = std::abs(r.slack) <= tol.eq;
  r.diagnostics_ok = std::all_of(r.diagnostics.begin(), r.diagnostics.end(),
                                 [](const auto& d) { return std::abs(d.second) <= kDiagnosticTolerance; });
}

void add_gap(InequalityReport& r, const char* name, const InvariantValue& v) {
  if (v.gap) r.info.emplace_back(name, *v.gap);
}

int sum_of(const std::vector<int>& blocks) { return std::accumulate(blocks.begin(), blocks.end(), 0); }

double mean_term(PointAnalysis& pa, int s) {
  if (s < pa.d()) {
    const double h = pa.script_H(s).value;
    return h * h;
  }
  return pa.geom().H_D.squaredNorm();
}

std::string mean_term_name(const PointAnalysis& pa, int s) {
  return s < pa.d() ? "H_script(" + std::to_string(s) + ")^2" : "|H_D|^2";
}

// Theorem-V style diagnostics for the maximizing tuple of delta_m^+.
void theorem_V_diagnostics(InequalityReport& r, PointAnalysis& pa, const InvariantValue& v,
                           const std::vector<int>& blocks, double ambient_target) {
  const int s = sum_of(blocks);
  const TupleDiagnostics td = tuple_diagnostics(pa, v.tuple.C, blocks);
  const double best_mean = s < pa.d() ? pa.script_H(s).value : pa.geom().H_D.norm();
  r.diagnostics.emplace_back("mixed_totally_geodesic", td.mixed);
  r.diagnostics.emplace_back("H_block_spread", td.spread);
  r.diagnostics.emplace_back("H_V_gap", best_mean - pa.H_of(v.tuple.C).norm());
  r.diagnostics.emplace_back("ambient_attainment_gap",
                             ambient_target - pa.ambient().mutual(pa.to_ambient(v.tuple.C), blocks));
}

}  // namespace

double default_curvature_bound(const AmbientSpace& amb) { return amb.sectional_range().second; }

void validate_curvature_bound(const AmbientSpace& amb, double c, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  const int n = amb.dim();
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    VectorXd x(n), y(n);
    for (int j = 0; j < n; ++j) x[j] = N(rng);
    for (int j = 0; j < n; ++j) y[j] = N(rng);
    x.normalize();
    y -= x.dot(y) * x;
    if (y.norm() < 1e-12) continue;
    y.normalize();
    worst = std::max(worst, amb.curvature().sectional(x, y));
  }
  if (worst > c + 1e-9)
    throw BoundViolation("ambient sectional curvature " + std::to_string(worst) + " exceeds the bound c = " +
                         std::to_string(c));
}

InequalityReport check_theorem_V(PointAnalysis& pa, const std::vector<int>& blocks, const ToleranceConfig& tol) {
  if (blocks.size() < 2) throw BlockSizeError("needs k >= 2 blocks");
  const int k = static_cast<int>(blocks.size());
  const int s = sum_of(blocks);
  InequalityReport r;
  r.theorem = "theorem_V";
  r.params = blocks;
  const InvariantValue& v = pa.delta_m(blocks, +1);
  const double amb = pa.ambient().delta_m_plus(blocks);
  r.lhs = v.value;
  r.rhs = amb + (k - 1.0) / (2.0 * k) * mean_term(pa, s);
  theorem_V_diagnostics(r, pa, v, blocks, amb);
  add_gap(r, "lhs_certification_gap", v);
  r.provenance = {{"lhs", "delta_m:+:" + blocks_key(blocks)},
                  {"rhs", "ambient delta_m:+:" + blocks_key(blocks) + " + (k-1)/(2k) * " + mean_term_name(pa, s)}};
  finalize(r, pa, tol);
  return r;
}

InequalityReport check_curvature_bound_form(PointAnalysis& pa, double c, const std::vector<int>& blocks,
                                            const ToleranceConfig& tol) {
  if (blocks.size() < 2) throw BlockSizeError("needs k >= 2 blocks");
  validate_curvature_bound(pa.ambient().space(), c, keyed_seed(0, "curvature_bound"));
  const int k = static_cast<int>(blocks.size());
  const int s = sum_of(blocks);
  int sq = 0;
  for (int n : blocks) sq += n * n;
  InequalityReport r;
  r.theorem = "curvature_bound";
  r.params = blocks;
  const InvariantValue& v = pa.delta_m(blocks, +1);
  const double amb = c / 2 * (s * s - sq);
  r.lhs = v.value;
  r.rhs = amb + (k - 1.0) / (2.0 * k) * mean_term(pa, s);
  theorem_V_diagnostics(r, pa, v, blocks, amb);
  add_gap(r, "lhs_certification_gap", v);
  r.info.emplace_back("c", c);
  r.provenance = {{"lhs", "delta_m:+:" + blocks_key(blocks)},
                  {"rhs", "(c/2)(s^2 - sum n_i^2) + (k-1)/(2k) * " + mean_term_name(pa, s)}};
  finalize(r, pa, tol);
  return r;
}

InequalityReport check_chen_type(PointAnalysis& pa, double c, const std::vector<int>& blocks,
                                 const ToleranceConfig& tol) {
  validate_curvature_bound(pa.ambient().space(), c, keyed_seed(0, "curvature_bound"));
  const int d = pa.d();
  const int k = static_cast<int>(blocks.size());
  const int s = sum_of(blocks);
  if (s > d) throw BlockSizeError("block sizes exceed d");
  int tri = 0;
  for (int n : blocks) tri += n * (n - 1);
  InequalityReport r;
  r.theorem = "chen_type";
  r.params = blocks;
  const ChenDelta& cd = pa.chen(blocks);
  const double coef = static_cast<double>(d) * d * (d + k - 1 - s) / (2.0 * (d + k - s));
  r.lhs = cd.delta;
  r.rhs = coef * pa.geom().H_D.squaredNorm() + c / 2 * (d * (d - 1) - tri);
  add_gap(r, "lhs_certification_gap", cd.min_tau);
  r.info.emplace_back("c", c);
  r.info.emplace_back("delta_hat", cd.delta_hat);
  r.provenance = {{"lhs", "delta:" + blocks_key(blocks)},
                  {"rhs", "d^2(d+k-1-s)/(2(d+k-s)) |H_D|^2 + (c/2)[d(d-1) - sum n_i(n_i-1)]"}};
  finalize(r, pa, tol);
  return r;
}

InequalityReport check_supplement(PointAnalysis& pa, int k, const ToleranceConfig& tol) {
  const int d = pa.d();
  if (k < 2 || k + 1 > d) throw BlockSizeError("supplement needs 2 <= k and k + 1 <= d");
  InequalityReport r;
  r.theorem = "supplement";
  r.params = {k};
  const InvariantValue& v = pa.delta_m_aggregate(k, -1);
  r.lhs = v.value;
  r.rhs = (k - 1.0) / (2.0 * k * (k + 1)) * pa.geom().H_D.squaredNorm() + pa.ambient().delta_m_plus_aggregate(k + 1);

  // Extend the minimizing tuple by the orthogonal complement of V in D.
  std::vector<int> blocks = v.tuple.blocks;
  MatrixXd C = v.tuple.C;
  const int s = sum_of(blocks);
  if (s < d) {
    const MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(C).householderQ();
    MatrixXd ext(d, d);
    ext << C, Q.rightCols(d - s);
    C = ext;
    blocks.push_back(d - s);
  }
  const TupleDiagnostics td = tuple_diagnostics(pa, C, blocks);
  double leave_one_out = 0.0;
  if (blocks.size() > static_cast<std::size_t>(k)) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      std::vector<int> rest;
      MatrixXd Cr(d, 0);
      int oj = 0;
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        if (j != i) {
          rest.push_back(blocks[j]);
          MatrixXd grown(d, Cr.cols() + blocks[j]);
          grown << Cr, C.middleCols(oj, blocks[j]);
          Cr = grown;
        }
        oj += blocks[j];
      }
      const double sm = rest.size() >= 2 ? mutual_curvature(pa.R_D(), Cr, rest) : 0.0;
      leave_one_out = std::max(leave_one_out, std::abs(sm - v.value));
    }
  }
  r.diagnostics.emplace_back("mixed_totally_geodesic", td.mixed);
  r.diagnostics.emplace_back("H_block_spread", td.spread);
  r.diagnostics.emplace_back("leave_one_out", leave_one_out);
  r.diagnostics.emplace_back("ambient_attainment_gap", pa.ambient().delta_m_plus(blocks) -
                                                           pa.ambient().mutual(pa.to_ambient(C), blocks));
  add_gap(r, "lhs_certification_gap", v);
  r.info.emplace_back("attaining_partition_size", static_cast<double>(v.tuple.blocks.size()));
  r.provenance = {{"lhs", "delta_m_agg:-:" + std::to_string(k) + " attained at " + blocks_key(v.tuple.blocks)},
                  {"rhs", "(k-1)/(2k(k+1)) |H_D|^2 + ambient delta_m_agg:+:" + std::to_string(k + 1)}};
  finalize(r, pa, tol);
  return r;
}

InequalityReport check_mixed_scalar(PointAnalysis& pa, const ToleranceConfig& tol) {
  const PointGeom& g = pa.geom();
  const MatrixXd& D = g.cr.d_frame;
  const MatrixXd& P = g.cr.perp_frame;
  InequalityReport r;
  r.theorem = "mixed_scalar";
  r.lhs = pa.mixed_scalar();
  const double amb = pa.ambient().delta_m_plus({g.cr.d(), g.cr.l()});
  r.rhs = 0.25 * g.H.squaredNorm() + amb;

  double mixed = 0.0;
  for (Eigen::Index a = 0; a < D.cols(); ++a)
    for (Eigen::Index b = 0; b < P.cols(); ++b) mixed = std::max(mixed, g.h(D.col(a), P.col(b)).norm());
  MatrixXd both(g.m(), g.m());
  both << D, P;
  r.diagnostics.emplace_back("mixed_totally_geodesic", mixed);
  r.diagnostics.emplace_back("H_D_minus_H_perp", (g.H_D - g.H_perp).norm());
  r.diagnostics.emplace_back("ambient_attainment_gap",
                             amb - pa.ambient().mutual(g.tangent * both, {g.cr.d(), g.cr.l()}));
  const double H2 = g.H.squaredNorm();
  r.info.emplace_back("norm_H_sq", H2);
  r.info.emplace_back("norm_H_D_sq", g.H_D.squaredNorm());
  r.info.emplace_back("norm_H_perp_sq", g.H_perp.squaredNorm());
  if (H2 > 0) {
    const double fD = g.H_D.dot(g.H) / H2, fP = g.H_perp.dot(g.H) / H2;
    r.info.emplace_back("H_D_fraction_of_H", fD);
    r.info.emplace_back("H_perp_fraction_of_H", fP);
    r.info.emplace_back("H_D_off_line", (g.H_D - fD * g.H).norm());
    r.info.emplace_back("H_perp_off_line", (g.H_perp - fP * g.H).norm());
  }
  r.info.emplace_back("totally_real_residual", g.cr.totally_real_residual);
  r.provenance = {{"lhs", "S_m(D,D_perp)"},
                  {"rhs", "|H|^2/4 + ambient delta_m:+:d,l (full mean curvature of M, not |H_D|^2)"}};
  finalize(r, pa, tol);
  return r;
}

InequalityReport check_holomorphic(PointAnalysis& pa, int k, const ToleranceConfig& tol) {
  const int d = pa.d();
  if (k < 2 || 2 * k > d) throw BlockSizeError("holomorphic check needs 2 <= k <= d/2");
  InequalityReport r;
  r.theorem = "holomorphic";
  r.params = {k};
  const InvariantValue& v = pa.delta_h(k, +1);
  const double amb = pa.ambient().delta_h_plus(k);
  r.lhs = v.value;
  r.rhs = amb + (k - 1.0) / (4.0 * k) * mean_term(pa, 2 * k);

  const MatrixXd F = v.planes.frame(pa.phi_D());
  const std::vector<int> blocks(k, 2);
  const TupleDiagnostics td = tuple_diagnostics(pa, F, blocks);
  const double best_mean = 2 * k < d ? pa.script_H(2 * k).value : pa.geom().H_D.norm();
  r.diagnostics.emplace_back("mixed_totally_geodesic", td.mixed);
  r.diagnostics.emplace_back("H_block_spread", td.spread);
  r.diagnostics.emplace_back("H_V_gap", best_mean - pa.H_of(F).norm());
  r.diagnostics.emplace_back("ambient_attainment_gap", amb - pa.ambient().s_h(pa.to_ambient(v.planes.X)));
  add_gap(r, "lhs_certification_gap", v);
  r.provenance = {{"lhs", "delta_h:+:" + std::to_string(k)},
                  {"rhs", "ambient delta_h:+:" + std::to_string(k) + " + (k-1)/(4k) * " + mean_term_name(pa, 2 * k)}};
  finalize(r, pa, tol);
  return r;
}

std::vector<InequalityReport> check_corollary_C03(PointAnalysis& pa, const ToleranceConfig& tol) {
  if (!pa.ambient().space().flat()) throw AmbientMismatch("normalized-delta bound is stated for a flat ambient");
  std::vector<InequalityReport> out;
  for (int s = 2; s <= pa.d(); ++s) {
    InequalityReport r;
    r.theorem = "corollary_C03";
    r.params = {s};
    const InvariantValue& v = pa.normalized_bar(s);
    r.lhs = v.value;
    r.rhs = mean_term(pa, s);
    add_gap(r, "lhs_certification_gap", v);
    r.provenance = {{"lhs", "Delta_bar:" + std::to_string(s) + " attained at " + blocks_key(v.tuple.blocks)},
                    {"rhs", mean_term_name(pa, s)}};
    finalize(r, pa, tol);
    out.push_back(std::move(r));
  }
  return out;
}

DMinimalityReport d_minimality_diagnostic(const std::vector<PointAnalysis*>& points, const ToleranceConfig& tol) {
  DMinimalityReport out;
  bool first = true;
  for (PointAnalysis* pa : points) {
    if (!pa->ambient().space().flat()) throw AmbientMismatch("D-minimality diagnostic is stated for a flat ambient");
    const int d = pa->d();
    double wa = -std::numeric_limits<double>::infinity();
    for (int k = 2; k <= d; ++k)
      for (const auto& p : partitions_exact(k, d)) wa = std::max(wa, pa->delta_m(p, +1).value);
    double wb = -std::numeric_limits<double>::infinity();
    for (int k = 2; k <= d; ++k) wb = std::max(wb, pa->delta_m_aggregate(k, -1).value);
    const double wc = pa->mixed_scalar();
    const bool has_h = d >= 4;
    const double wd = has_h ? pa->delta_h(d / 2, +1).value : 0.0;
    const double hd = pa->geom().H_D.norm();
    if (first) {
      out.max_H_D = hd;
      out.witness_full_partition = wa;
      out.witness_aggregate_min = wb;
      out.witness_mixed_scalar = wc;
      out.witness_holomorphic = wd;
      first = false;
    } else {
      out.max_H_D = std::max(out.max_H_D, hd);
      out.witness_full_partition = std::max(out.witness_full_partition, wa);
      out.witness_aggregate_min = std::max(out.witness_aggregate_min, wb);
      out.witness_mixed_scalar = std::max(out.witness_mixed_scalar, wc);
      out.witness_holomorphic = std::max(out.witness_holomorphic, wd);
    }
    out.has_holomorphic = has_h;
    ++out.samples;
  }
  out.d_minimal = out.samples > 0 && out.max_H_D <= tol.eq;
  const bool any_witness = out.witness_full_partition > tol.eq || out.witness_aggregate_min > tol.eq ||
                           out.witness_mixed_scalar > tol.eq || (out.has_holomorphic && out.witness_holomorphic > tol.eq);
  out.contradiction = out.d_minimal && any_witness;
  return out;
}

}  // namespace crcurv
