#include "crcurv/analysis.hpp"

#include "crcurv/errors.hpp"

namespace crcurv {

std::uint64_t keyed_seed(std::uint64_t seed, const std::string& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix_seed(seed, h);
}

std::string blocks_key(const std::vector<int>& blocks) {
  std::string s;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(blocks[i]);
  }
  return s;
}

AmbientInvariants::AmbientInvariants(AmbientSpace amb, InvariantConfig cfg) : amb_(std::move(amb)), cfg_(cfg) {}

double AmbientInvariants::memo(const std::string& key, const std::function<double()>& compute) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double v = compute();
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, v).first->second;
}

double AmbientInvariants::delta_m_plus(const std::vector<int>& blocks) {
  if (amb_.flat()) return 0.0;
  const std::string key = "delta_m:+:" + blocks_key(blocks);
  return memo(key, [&] {
    InvariantConfig c = cfg_;
    c.opt.seed = keyed_seed(cfg_.opt.seed, "ambient:" + key);
    return crcurv::delta_m(amb_.curvature(), blocks, +1, c).value;
  });
}

double AmbientInvariants::delta_m_plus_aggregate(int k) {
  if (amb_.flat()) return 0.0;
  if (k < 2 || k > amb_.dim()) throw BlockSizeError("ambient aggregate needs 2 <= k <= 2q");
  double best = 0.0;
  bool first = true;
  for (const auto& p : partitions_up_to(k, amb_.dim())) {
    const double v = delta_m_plus(p);
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

double AmbientInvariants::delta_h_plus(int k) {
  if (amb_.flat()) return 0.0;
  const std::string key = "delta_h:+:" + std::to_string(k);
  return memo(key, [&] {
    InvariantConfig c = cfg_;
    c.opt.seed = keyed_seed(cfg_.opt.seed, "ambient:" + key);
    return crcurv::delta_h(amb_.curvature(), amb_.J(), k, +1, c).value;
  });
}

double AmbientInvariants::mutual(const MatrixXd& vectors, const std::vector<int>& blocks) const {
  if (amb_.flat()) return 0.0;
  return mutual_curvature(amb_.curvature(), vectors, blocks);
}

double AmbientInvariants::s_h(const MatrixXd& X) const {
  if (amb_.flat()) return 0.0;
  return s_h_unchecked(amb_.curvature(), amb_.J(), X);
}

PointAnalysis::PointAnalysis(PointGeom geom, AmbientInvariants& ambient, InvariantConfig cfg, std::uint64_t seed)
    : geom_(std::move(geom)), ambient_(ambient), cfg_(cfg), seed_(seed) {
  const MatrixXd& D = geom_.cr.d_frame;
  R_D_ = geom_.R.restricted(D);
  phi_D_ = standard_complex_structure(d() / 2);
  for (const auto& S : geom_.shape) shape_D_.push_back(D.transpose() * S * D);
}

InvariantConfig PointAnalysis::cfg_for(const std::string& key) const {
  InvariantConfig c = cfg_;
  c.opt.seed = keyed_seed(seed_, key);
  return c;
}

double PointAnalysis::tau_D() const { return tau_subspace(R_D_, MatrixXd::Identity(d(), d())); }

double PointAnalysis::mixed_scalar() const {
  return mixed_scalar_curvature(geom_.R, geom_.cr.d_frame, geom_.cr.perp_frame);
}

VectorXd PointAnalysis::h_D(const VectorXd& v, const VectorXd& w) const {
  VectorXd out(shape_D_.size());
  for (std::size_t a = 0; a < shape_D_.size(); ++a) out[a] = v.dot(shape_D_[a] * w);
  return out;
}

VectorXd PointAnalysis::H_of(const MatrixXd& V) const {
  VectorXd out(shape_D_.size());
  for (std::size_t a = 0; a < shape_D_.size(); ++a) out[a] = (V.transpose() * shape_D_[a] * V).trace();
  return out;
}

MatrixXd PointAnalysis::to_ambient(const MatrixXd& V) const { return geom_.tangent * (geom_.cr.d_frame * V); }

const InvariantValue& PointAnalysis::delta_m(const std::vector<int>& blocks, int sign) {
  const std::string key = std::string("delta_m:") + (sign > 0 ? "+" : "-") + ":" + blocks_key(blocks);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return values_.emplace(key, crcurv::delta_m(R_D_, blocks, sign, cfg_for(key))).first->second;
}

const InvariantValue& PointAnalysis::delta_m_aggregate(int k, int sign) {
  const std::string key = std::string("delta_m_agg:") + (sign > 0 ? "+" : "-") + ":" + std::to_string(k);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  if (k < 2 || k > d()) throw BlockSizeError("aggregate needs 2 <= k <= d");
  const InvariantValue* best = nullptr;
  for (const auto& p : partitions_up_to(k, d())) {
    const InvariantValue& v = delta_m(p, sign);
    if (!best || (sign > 0 ? v.value > best->value : v.value < best->value)) best = &v;
  }
  return values_.emplace(key, *best).first->second;
}

const ChenDelta& PointAnalysis::chen(const std::vector<int>& blocks) {
  const std::string key = "chen:" + blocks_key(blocks);
  if (auto it = chens_.find(key); it != chens_.end()) return it->second;
  return chens_.emplace(key, chen_delta(R_D_, blocks, cfg_for(key))).first->second;
}

const InvariantValue& PointAnalysis::delta_h(int k, int sign) {
  const std::string key = std::string("delta_h:") + (sign > 0 ? "+" : "-") + ":" + std::to_string(k);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return values_.emplace(key, crcurv::delta_h(R_D_, phi_D_, k, sign, cfg_for(key))).first->second;
}

const InvariantValue& PointAnalysis::script_H(int s) {
  const std::string key = "H_script:" + std::to_string(s);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return values_.emplace(key, crcurv::script_H(shape_D_, d(), s, cfg_for(key))).first->second;
}

double PointAnalysis::normalized(const std::vector<int>& blocks) {
  const double k = static_cast<double>(blocks.size());
  return 2 * k / (k - 1) * delta_m(blocks, +1).value;
}

const InvariantValue& PointAnalysis::normalized_bar(int s) {
  const std::string key = "Delta_bar:" + std::to_string(s);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  if (s < 2 || s > d()) throw BlockSizeError("normalized aggregate needs 2 <= s <= d");
  InvariantValue best;
  bool first = true;
  for (int k = 2; k <= s; ++k)
    for (const auto& p : partitions_exact(k, s)) {
      InvariantValue v = delta_m(p, +1);
      v.value *= 2.0 * k / (k - 1);
      if (first || v.value > best.value) best = std::move(v);
      first = false;
    }
  return values_.emplace(key, best).first->second;
}

}  // namespace crcurv
