#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crcurv/ambient.hpp"
#include "crcurv/chart.hpp"
#include "crcurv/geometry.hpp"
#include "crcurv/invariants.hpp"
#include "crcurv/report.hpp"

namespace crcurv {

/// Check names accepted by --check, in report order.
const std::vector<std::string>& check_names();

struct RunConfig {
  /// "name:params", "file:<path>" or "all"; may repeat.
  std::vector<std::string> charts;
  int points = 9;
  bool grid = false;  // lattice of about `points` nodes instead of seeded-random draws
  std::uint64_t seed = 1;
  std::vector<std::string> checks;      // names from check_names() or "all"
  std::vector<std::string> invariants;  // e.g. "delta_m:+:1,2", "tau", "H_script:2"
  ToleranceConfig tol;
  InvariantConfig inv;
  std::optional<double> bound_c;
  std::string out;  // empty or "-" means stdout
  std::string format = "jsonl";
  int jobs = 1;
};

struct ResolvedChart {
  std::string id;
  Chart chart;
  AmbientSpace ambient;
};

/// Loads every chart source; SyntaxError, CRSplitError, ImmersionError and
/// ConfigError pass through.
std::vector<ResolvedChart> resolve_charts(const std::vector<std::string>& sources);

/// Sample points strictly inside the chart's box.
std::vector<Eigen::VectorXd> sample_points(const Chart& chart, int count, bool grid, std::uint64_t seed);

struct RunResult {
  std::vector<Record> records;
  int exit_code = 0;  // 0 all pass, 1 some check failed, 3 a computation failed
};

/// Throws ConfigError (or a chart-loading error, or BoundViolation) before any
/// point is evaluated; computation failures become "error" records.
RunResult run(const RunConfig& cfg);

/// Writes records as JSON lines or CSV to cfg.out.
void write_report(const RunResult& result, const RunConfig& cfg);

/// Short description of a check, invariant kind or catalog chart.
std::string explain(const std::string& id);

}  // namespace crcurv
