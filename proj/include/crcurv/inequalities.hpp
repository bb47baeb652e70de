#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "crcurv/analysis.hpp"

namespace crcurv {

/// Equality-case diagnostics are compared against this.
inline constexpr double kDiagnosticTolerance = 1e-5;

struct InequalityReport {
  std::string theorem;
  std::vector<int> params;
  VectorXd u;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
  bool equality = false;
  /// Residuals that vanish when the equality conditions hold.
  std::vector<std::pair<std::string, double>> diagnostics;
  bool diagnostics_ok = true;
  /// Values reported alongside but not part of the equality conditions.
  std::vector<std::pair<std::string, double>> info;
  std::vector<std::pair<std::string, std::string>> provenance;
};

/// Samples `samples` ambient planes and throws BoundViolation if any sectional
/// curvature exceeds c + 1e-9.
void validate_curvature_bound(const AmbientSpace& amb, double c, std::uint64_t seed, int samples = 1000);

/// Default upper bound on ambient sectional curvature for the model.
double default_curvature_bound(const AmbientSpace& amb);

InequalityReport check_theorem_V(PointAnalysis& pa, const std::vector<int>& blocks, const ToleranceConfig& tol);
InequalityReport check_curvature_bound_form(PointAnalysis& pa, double c, const std::vector<int>& blocks,
                                            const ToleranceConfig& tol);
InequalityReport check_chen_type(PointAnalysis& pa, double c, const std::vector<int>& blocks,
                                 const ToleranceConfig& tol);
InequalityReport check_supplement(PointAnalysis& pa, int k, const ToleranceConfig& tol);
InequalityReport check_mixed_scalar(PointAnalysis& pa, const ToleranceConfig& tol);
InequalityReport check_holomorphic(PointAnalysis& pa, int k, const ToleranceConfig& tol);
/// One report per s = 2..d; flat ambient only.
std::vector<InequalityReport> check_corollary_C03(PointAnalysis& pa, const ToleranceConfig& tol);

struct DMinimalityReport {
  int samples = 0;
  double max_H_D = 0.0;
  double witness_full_partition = 0.0;  // max delta_m^+(n) with sum n = d
  double witness_aggregate_min = 0.0;   // max over k of delta_m^-(k)
  double witness_mixed_scalar = 0.0;    // S_m(D, D-perp)
  double witness_holomorphic = 0.0;     // delta_h^+(d/2), d >= 4
  bool has_holomorphic = false;
  bool d_minimal = false;
  bool contradiction = false;
};

DMinimalityReport d_minimality_diagnostic(const std::vector<PointAnalysis*>& points, const ToleranceConfig& tol);

}  // namespace crcurv
