#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "crcurv/ambient.hpp"
#include "crcurv/geometry.hpp"
#include "crcurv/invariants.hpp"

namespace crcurv {

/// Seed for a named computation: FNV-1a of `key` mixed into `seed`.
std::uint64_t keyed_seed(std::uint64_t seed, const std::string& key);

std::string blocks_key(const std::vector<int>& blocks);

/// Invariants of the ambient model, which are the same at every point.
/// Thread-safe; flat models short-circuit to zero.
class AmbientInvariants {
 public:
  AmbientInvariants(AmbientSpace amb, InvariantConfig cfg);

  const AmbientSpace& space() const { return amb_; }
  double delta_m_plus(const std::vector<int>& blocks);
  double delta_m_plus_aggregate(int k);
  double delta_h_plus(int k);
  /// S_m of ambient vectors grouped into blocks.
  double mutual(const MatrixXd& vectors, const std::vector<int>& blocks) const;
  double s_h(const MatrixXd& X) const;

 private:
  double memo(const std::string& key, const std::function<double()>& compute);

  AmbientSpace amb_;
  InvariantConfig cfg_;
  std::mutex mu_;
  std::map<std::string, double> cache_;
};

/// Per-point invariants over D with memoization, so checks sharing a term
/// compute it once. Not thread-safe; use one instance per point.
class PointAnalysis {
 public:
  PointAnalysis(PointGeom geom, AmbientInvariants& ambient, InvariantConfig cfg, std::uint64_t seed);

  const PointGeom& geom() const { return geom_; }
  AmbientInvariants& ambient() { return ambient_; }
  int d() const { return geom_.cr.d(); }
  /// Induced curvature in the J-adapted D-frame; phi_D is the standard J there.
  const CurvatureTensor& R_D() const { return R_D_; }
  const MatrixXd& phi_D() const { return phi_D_; }
  const std::vector<MatrixXd>& shape_D() const { return shape_D_; }

  double tau_D() const;
  double mixed_scalar() const;
  /// h(v, w) and H_V for D-coordinate vectors, in normal coordinates.
  VectorXd h_D(const VectorXd& v, const VectorXd& w) const;
  VectorXd H_of(const MatrixXd& V) const;
  /// D-coordinate columns mapped to ambient vectors.
  MatrixXd to_ambient(const MatrixXd& V) const;

  const InvariantValue& delta_m(const std::vector<int>& blocks, int sign);
  const InvariantValue& delta_m_aggregate(int k, int sign);
  const ChenDelta& chen(const std::vector<int>& blocks);
  const InvariantValue& delta_h(int k, int sign);
  const InvariantValue& script_H(int s);
  double normalized(const std::vector<int>& blocks);
  const InvariantValue& normalized_bar(int s);

 private:
  InvariantConfig cfg_for(const std::string& key) const;

  PointGeom geom_;
  AmbientInvariants& ambient_;
  InvariantConfig cfg_;
  std::uint64_t seed_;
  CurvatureTensor R_D_;
  MatrixXd phi_D_;
  std::vector<MatrixXd> shape_D_;
  std::map<std::string, InvariantValue> values_;
  std::map<std::string, ChenDelta> chens_;
};

}  // namespace crcurv
