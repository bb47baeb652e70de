// crcurv: curvature invariants and inequality checks on charted CR-submanifolds.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "crcurv/catalog.hpp"
#include "crcurv/errors.hpp"
#include "crcurv/run.hpp"

namespace {

int default_jobs() {
  if (const char* v = std::getenv("CRCURV_JOBS")) {
    const int n = std::atoi(v);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature invariants and inequality checks for CR-submanifolds of complex space forms"};
  app.require_subcommand(1);

  auto* cat = app.add_subcommand("catalog", "List the built-in charts");

  crcurv::RunConfig cfg;
  cfg.inv.oracle_samples = 1000;
  cfg.jobs = default_jobs();
  unsigned long long seed = 1;
  auto* run = app.add_subcommand("run", "Evaluate invariants and checks at sampled points");
  run->add_option("--chart", cfg.charts, "name:params, file:<path> or all (repeatable)")->required();
  run->add_option("--points", cfg.points, "number of sample points per chart")->capture_default_str();
  run->add_flag("--grid", cfg.grid, "use a lattice of about --points nodes");
  run->add_option("--seed", seed, "base seed")->capture_default_str();
  run->add_option("--check", cfg.checks, "check name or all (repeatable)");
  run->add_option("--invariant", cfg.invariants, "invariant spec, e.g. delta_m:+:1,1 (repeatable)");
  run->add_option("--tol-slack", cfg.tol.slack, "slack tolerance")->capture_default_str();
  run->add_option("--tol-eq", cfg.tol.eq, "equality tolerance")->capture_default_str();
  run->add_option("--tol-rank", cfg.tol.rank, "immersion rank tolerance")->capture_default_str();
  run->add_option("--tol-cr", cfg.tol.cr, "CR split singular value tolerance")->capture_default_str();
  run->add_option("--restarts", cfg.inv.opt.restarts, "optimizer restarts")->capture_default_str();
  run->add_option("--max-sweeps", cfg.inv.opt.max_sweeps, "sweeps per restart")->capture_default_str();
  run->add_option("--oracle-samples", cfg.inv.oracle_samples, "random samples for the certification gap (0: off)")
      ->capture_default_str();
  double bound_c = 0.0;
  auto* bound = run->add_option("--bound-c", bound_c, "upper bound on ambient sectional curvature");
  run->add_option("--out", cfg.out, "report path (default stdout)");
  run->add_option("--format", cfg.format, "jsonl or csv")->capture_default_str();
  run->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();

  std::string what;
  auto* exp = app.add_subcommand("explain", "Describe a check, invariant or catalog chart");
  exp->add_option("id", what, "check name, invariant kind or chart name:params")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cat) {
      for (const auto& e : crcurv::catalog()) {
        std::printf("%-36s d=%d l=%d q=%d  %s\n", e.id().c_str(), e.chart.d, e.chart.l, e.ambient.q(), e.doc.c_str());
      }
      return 0;
    }
    if (*exp) {
      std::cout << crcurv::explain(what);
      if (!what.empty() && crcurv::explain(what).back() != '\n') std::cout << '\n';
      return 0;
    }
    cfg.seed = seed;
    if (*bound) cfg.bound_c = bound_c;
    crcurv::RunResult result = crcurv::run(cfg);
    crcurv::write_report(result, cfg);
    for (const auto& r : result.records)
      if (r.raw("kind") == "\"error\"") std::cerr << "error: " << r.json() << '\n';
    return result.exit_code;
  } catch (const crcurv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const crcurv::BoundViolation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const crcurv::SyntaxError& e) {
    std::cerr << "chart file error: " << e.what() << '\n';
    return 2;
  } catch (const crcurv::CRSplitError& e) {
    std::cerr << "chart error: " << e.what() << '\n';
    return 2;
  } catch (const crcurv::ImmersionError& e) {
    std::cerr << "chart error: " << e.what() << '\n';
    return 2;
  } catch (const crcurv::DimensionError& e) {
    std::cerr << "chart error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
