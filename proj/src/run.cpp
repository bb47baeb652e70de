#include "crcurv/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "crcurv/analysis.hpp"
#include "crcurv/catalog.hpp"
#include "crcurv/chart_file.hpp"
#include "crcurv/errors.hpp"
#include "crcurv/inequalities.hpp"

namespace crcurv {

namespace {

const std::vector<std::string> kChecks = {"theorem_V",    "curvature_bound", "chen_type",     "supplement",
                                          "mixed_scalar", "holomorphic",     "corollary_C03", "d_minimality"};

/// A parsed --invariant request.
struct InvariantSpec {
  std::string text;
  std::string kind;
  int sign = 0;
  std::vector<int> blocks;
  int k = 0;
};

std::vector<int> parse_ints(const std::string& s, const std::string& where) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad positive integer '" + item + "' in '" + where + "'");
    }
  }
  if (out.empty()) throw ConfigError("missing sizes in '" + where + "'");
  return out;
}

InvariantSpec parse_invariant(const std::string& text) {
  InvariantSpec s;
  s.text = text;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(p);
  if (parts.empty()) throw ConfigError("empty invariant");
  s.kind = parts[0];
  auto sign_of = [&](const std::string& t) {
    if (t == "+") return +1;
    if (t == "-") return -1;
    throw ConfigError("invariant '" + text + "' needs a sign + or -");
  };
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw ConfigError("malformed invariant '" + text + "'");
  };
  if (s.kind == "tau" || s.kind == "S_m") {
    need(1);
  } else if (s.kind == "delta" || s.kind == "delta_hat" || s.kind == "Delta") {
    need(2);
    s.blocks = parse_ints(parts[1], text);
    if (s.kind == "Delta" && s.blocks.size() < 2) throw ConfigError("Delta needs at least two blocks");
  } else if (s.kind == "delta_m") {
    need(3);
    s.sign = sign_of(parts[1]);
    s.blocks = parse_ints(parts[2], text);
    if (s.blocks.size() < 2) throw ConfigError("delta_m needs at least two blocks");
  } else if (s.kind == "delta_m_agg" || s.kind == "delta_h") {
    need(3);
    s.sign = sign_of(parts[1]);
    const auto v = parse_ints(parts[2], text);
    if (v.size() != 1 || v[0] < 2) throw ConfigError("'" + text + "' needs a single k >= 2");
    s.k = v[0];
  } else if (s.kind == "H_script" || s.kind == "Delta_bar") {
    need(2);
    const auto v = parse_ints(parts[1], text);
    if (v.size() != 1) throw ConfigError("'" + text + "' needs a single s");
    s.k = v[0];
    if (s.kind == "Delta_bar" && s.k < 2) throw ConfigError("Delta_bar needs s >= 2");
  } else {
    throw ConfigError("unknown invariant '" + s.kind + "'");
  }
  return s;
}

int sum_of(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

/// ConfigError if `s` cannot be evaluated on a d-dimensional D.
void check_fits(const InvariantSpec& s, int d, const std::string& chart) {
  bool ok = true;
  if (!s.blocks.empty()) ok = sum_of(s.blocks) <= d;
  if (s.kind == "delta_m_agg") ok = s.k <= d;
  if (s.kind == "delta_h") ok = 2 * s.k <= d;
  if (s.kind == "H_script" || s.kind == "Delta_bar") ok = s.k <= d;
  if (!ok) throw ConfigError("invariant '" + s.text + "' does not fit d = " + std::to_string(d) + " of " + chart);
}

Record base_record(const std::string& chart, int point, const Eigen::VectorXd& u, const std::string& kind,
                   const std::string& name) {
  Record r;
  r.add("chart", chart).add("point", point).add("u", u).add("kind", kind).add("name", name);
  return r;
}

void finish(Record& r, std::uint64_t seed, const ToleranceConfig& tol) {
  r.add("tol_slack", tol.slack).add("tol_eq", tol.eq).add("seed", static_cast<unsigned long long>(seed));
  r.add("version", kVersion);
}

Record check_record(const std::string& chart, int point, const InequalityReport& rep, std::uint64_t seed,
                    const ToleranceConfig& tol, bool& ok) {
  Record r = base_record(chart, point, rep.u, "check", rep.theorem);
  const bool good = rep.pass && (!rep.equality || rep.diagnostics_ok);
  ok = ok && good;
  r.add("params", rep.params).add("lhs", rep.lhs).add("rhs", rep.rhs).add("slack", rep.slack);
  r.add("pass", rep.pass).add("equality", rep.equality).add("diagnostics", rep.diagnostics);
  r.add("diagnostics_ok", rep.diagnostics_ok).add("ok", good).add("info", rep.info).add("provenance", rep.provenance);
  finish(r, seed, tol);
  return r;
}

Record invariant_record(const std::string& chart, int point, const Eigen::VectorXd& u, const std::string& name,
                        double value, const InvariantValue* v, std::uint64_t seed, const ToleranceConfig& tol) {
  Record r = base_record(chart, point, u, "invariant", name);
  r.add("value", value);
  if (v) {
    r.add("blocks", v->blocks);
    if (v->gap) r.add("gap", *v->gap);
    else r.add_null("gap");
    r.add("restarts_used", v->restarts_used).add("sweeps", v->sweeps);
  } else {
    r.add_null("gap");
  }
  finish(r, seed, tol);
  return r;
}

Record error_record(const std::string& chart, int point, const Eigen::VectorXd& u, const std::string& what,
                    const std::string& message, std::uint64_t seed, const ToleranceConfig& tol) {
  Record r = base_record(chart, point, u, "error", what);
  r.add("message", message);
  finish(r, seed, tol);
  return r;
}

void evaluate_invariant(PointAnalysis& pa, const InvariantSpec& s, double& value, const InvariantValue*& v) {
  v = nullptr;
  if (s.kind == "tau") value = pa.tau_D();
  else if (s.kind == "S_m") value = pa.mixed_scalar();
  else if (s.kind == "delta") {
    const ChenDelta& c = pa.chen(s.blocks);
    value = c.delta;
    v = &c.min_tau;
  } else if (s.kind == "delta_hat") {
    const ChenDelta& c = pa.chen(s.blocks);
    value = c.delta_hat;
    v = &c.max_tau;
  } else if (s.kind == "delta_m") {
    v = &pa.delta_m(s.blocks, s.sign);
    value = v->value;
  } else if (s.kind == "delta_m_agg") {
    v = &pa.delta_m_aggregate(s.k, s.sign);
    value = v->value;
  } else if (s.kind == "delta_h") {
    v = &pa.delta_h(s.k, s.sign);
    value = v->value;
  } else if (s.kind == "H_script") {
    v = &pa.script_H(s.k);
    value = v->value;
  } else if (s.kind == "Delta") {
    value = pa.normalized(s.blocks);
    v = &pa.delta_m(s.blocks, +1);
  } else if (s.kind == "Delta_bar") {
    v = &pa.normalized_bar(s.k);
    value = v->value;
  }
}

struct ChartPlan {
  const ResolvedChart* chart;
  std::vector<std::string> checks;
  std::vector<InvariantSpec> invariants;
  double c = 0.0;
  std::uint64_t seed = 0;
};

/// All records for one point, in a fixed order.
std::vector<Record> evaluate_point(const ChartPlan& plan, int index, const Eigen::VectorXd& u,
                                   AmbientInvariants& amb_inv, const RunConfig& cfg,
                                   std::unique_ptr<PointAnalysis>& keep, bool& ok, bool& failed) {
  const std::string& id = plan.chart->id;
  const std::uint64_t seed = keyed_seed(plan.seed, "point:" + std::to_string(index));
  std::vector<Record> out;
  const ToleranceConfig& tol = cfg.tol;
  try {
    PointGeom g = point_geometry(plan.chart->ambient, plan.chart->chart,
                                 std::span<const double>(u.data(), u.size()), tol);
    keep = std::make_unique<PointAnalysis>(std::move(g), amb_inv, cfg.inv, seed);
  } catch (const std::exception& e) {
    out.push_back(error_record(id, index, u, "point_geometry", e.what(), seed, tol));
    failed = true;
    return out;
  }
  PointAnalysis& pa = *keep;
  const int d = pa.d();
  for (const auto& s : plan.invariants) {
    try {
      double value = 0.0;
      const InvariantValue* v = nullptr;
      evaluate_invariant(pa, s, value, v);
      out.push_back(invariant_record(id, index, u, s.text, value, v, seed, tol));
    } catch (const std::exception& e) {
      out.push_back(error_record(id, index, u, s.text, e.what(), seed, tol));
      failed = true;
    }
  }
  auto guarded = [&](const std::string& name, const auto& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      out.push_back(error_record(id, index, u, name, e.what(), seed, tol));
      failed = true;
    }
  };
  for (const auto& check : plan.checks) {
    if (check == "theorem_V" || check == "curvature_bound" || check == "chen_type") {
      const int kmin = check == "chen_type" ? 1 : 2;
      for (int k = kmin; k <= d; ++k)
        for (const auto& p : partitions_up_to(k, d))
          guarded(check + ":" + blocks_key(p), [&] {
            InequalityReport r = check == "theorem_V"         ? check_theorem_V(pa, p, tol)
                                 : check == "curvature_bound" ? check_curvature_bound_form(pa, plan.c, p, tol)
                                                              : check_chen_type(pa, plan.c, p, tol);
            out.push_back(check_record(id, index, r, seed, tol, ok));
          });
    } else if (check == "supplement") {
      for (int k = 2; k <= d - 1; ++k)
        guarded(check + ":" + std::to_string(k),
                [&] { out.push_back(check_record(id, index, check_supplement(pa, k, tol), seed, tol, ok)); });
    } else if (check == "mixed_scalar") {
      guarded(check, [&] { out.push_back(check_record(id, index, check_mixed_scalar(pa, tol), seed, tol, ok)); });
    } else if (check == "holomorphic") {
      for (int k = 2; 2 * k <= d; ++k)
        guarded(check + ":" + std::to_string(k),
                [&] { out.push_back(check_record(id, index, check_holomorphic(pa, k, tol), seed, tol, ok)); });
    } else if (check == "corollary_C03") {
      guarded(check, [&] {
        for (const auto& r : check_corollary_C03(pa, tol)) out.push_back(check_record(id, index, r, seed, tol, ok));
      });
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& check_names() { return kChecks; }

std::vector<ResolvedChart> resolve_charts(const std::vector<std::string>& sources) {
  std::vector<ResolvedChart> out;
  for (const auto& src : sources) {
    if (src == "all") {
      for (auto& e : catalog()) out.push_back({e.id(), std::move(e.chart), e.ambient});
    } else if (src.rfind("file:", 0) == 0) {
      auto [chart, amb] = load_chart_file(src.substr(5));
      out.push_back({src, std::move(chart), amb});
    } else {
      CatalogEntry e = make_catalog_entry(src);
      out.push_back({e.id(), std::move(e.chart), e.ambient});
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_points(const Chart& chart, int count, bool grid, std::uint64_t seed) {
  const int m = chart.m();
  std::vector<Eigen::VectorXd> pts;
  if (count <= 0) return pts;
  if (grid) {
    int n = std::max(1, static_cast<int>(std::lround(std::pow(static_cast<double>(count), 1.0 / m))));
    long total = 1;
    for (int i = 0; i < m; ++i) total *= n;
    for (long idx = 0; idx < total; ++idx) {
      Eigen::VectorXd u(m);
      long r = idx;
      for (int i = m - 1; i >= 0; --i) {
        const auto [lo, hi] = chart.domain[i];
        u[i] = lo + (static_cast<double>(r % n) + 0.5) / n * (hi - lo);
        r /= n;
      }
      pts.push_back(u);
    }
    return pts;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int p = 0; p < count; ++p) {
    Eigen::VectorXd u(m);
    for (int i = 0; i < m; ++i) {
      const auto [lo, hi] = chart.domain[i];
      const double w = hi - lo;
      u[i] = lo + w * (0.02 + 0.96 * U(rng));  // stay clear of the box edges
    }
    pts.push_back(u);
  }
  return pts;
}

RunResult run(const RunConfig& cfg) {
  if (cfg.charts.empty()) throw ConfigError("no chart selected");
  if (cfg.points < 1) throw ConfigError("--points must be positive");
  if (cfg.jobs < 1) throw ConfigError("--jobs must be positive");
  if (cfg.format != "jsonl" && cfg.format != "csv") throw ConfigError("--format must be jsonl or csv");
  if (cfg.inv.opt.restarts < 1 || cfg.inv.opt.max_sweeps < 1) throw ConfigError("optimizer limits must be positive");
  if (cfg.inv.oracle_samples < 0) throw ConfigError("--oracle-samples must be non-negative");
  if (!(cfg.tol.slack >= 0) || !(cfg.tol.eq >= 0) || !(cfg.tol.rank > 0) || !(cfg.tol.cr > 0 && cfg.tol.cr < 0.5))
    throw ConfigError("tolerances out of range");

  std::vector<std::string> checks;
  bool explicit_flat_only = false;
  for (const auto& c : cfg.checks) {
    if (c == "all") {
      for (const auto& n : kChecks)
        if (std::find(checks.begin(), checks.end(), n) == checks.end()) checks.push_back(n);
      continue;
    }
    if (std::find(kChecks.begin(), kChecks.end(), c) == kChecks.end()) throw ConfigError("unknown check '" + c + "'");
    if (c == "corollary_C03" || c == "d_minimality") explicit_flat_only = true;
    if (std::find(checks.begin(), checks.end(), c) == checks.end()) checks.push_back(c);
  }
  std::vector<InvariantSpec> invariants;
  for (const auto& s : cfg.invariants) invariants.push_back(parse_invariant(s));
  if (checks.empty() && invariants.empty()) throw ConfigError("select at least one --check or --invariant");

  const std::vector<ResolvedChart> charts = resolve_charts(cfg.charts);
  std::vector<ChartPlan> plans;
  for (const auto& rc : charts) {
    ChartPlan plan;
    plan.chart = &rc;
    plan.seed = keyed_seed(cfg.seed, rc.id);
    for (const auto& s : invariants) check_fits(s, rc.chart.d, rc.id);
    const bool flat = rc.ambient.flat();
    for (const auto& c : checks) {
      if ((c == "corollary_C03" || c == "d_minimality") && !flat) {
        if (explicit_flat_only) throw ConfigError(c + " needs a flat ambient, " + rc.id + " is not flat");
        continue;
      }
      plan.checks.push_back(c);
    }
    plan.invariants = invariants;
    if (cfg.bound_c) {
      validate_curvature_bound(rc.ambient, *cfg.bound_c, keyed_seed(plan.seed, "bound"));
      plan.c = *cfg.bound_c;
    } else {
      plan.c = default_curvature_bound(rc.ambient);
    }
    plans.push_back(std::move(plan));
  }

  RunResult result;
  bool all_ok = true, any_failed = false;
  for (const auto& plan : plans) {
    const ResolvedChart& rc = *plan.chart;
    InvariantConfig amb_cfg = cfg.inv;
    amb_cfg.opt.seed = keyed_seed(plan.seed, "ambient");
    AmbientInvariants amb_inv(rc.ambient, amb_cfg);
    const auto pts = sample_points(rc.chart, cfg.points, cfg.grid, keyed_seed(plan.seed, "sampling"));
    const int n = static_cast<int>(pts.size());
    std::vector<std::vector<Record>> per_point(n);
    std::vector<std::unique_ptr<PointAnalysis>> analyses(n);
    std::vector<char> ok(n, 1), failed(n, 0);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next++; i < n; i = next++) {
        bool o = true, f = false;
        per_point[i] = evaluate_point(plan, i, pts[i], amb_inv, cfg, analyses[i], o, f);
        ok[i] = o;
        failed[i] = f;
      }
    };
    const int threads = std::min(cfg.jobs, std::max(1, n));
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    for (int i = 0; i < n; ++i) {
      for (auto& r : per_point[i]) result.records.push_back(std::move(r));
      all_ok = all_ok && ok[i];
      any_failed = any_failed || failed[i];
    }
    if (std::find(plan.checks.begin(), plan.checks.end(), "d_minimality") != plan.checks.end()) {
      std::vector<PointAnalysis*> ptrs;
      for (auto& a : analyses)
        if (a) ptrs.push_back(a.get());
      Record r = base_record(rc.id, -1, Eigen::VectorXd(), "check", "d_minimality");
      try {
        const DMinimalityReport dm = d_minimality_diagnostic(ptrs, cfg.tol);
        r.add("pass", !dm.contradiction).add("ok", !dm.contradiction).add("samples", dm.samples);
        r.add("d_minimal", dm.d_minimal).add("contradiction", dm.contradiction);
        std::vector<std::pair<std::string, double>> info = {{"max_H_D", dm.max_H_D},
                                                            {"witness_full_partition", dm.witness_full_partition},
                                                            {"witness_aggregate_min", dm.witness_aggregate_min},
                                                            {"witness_mixed_scalar", dm.witness_mixed_scalar}};
        if (dm.has_holomorphic) info.emplace_back("witness_holomorphic", dm.witness_holomorphic);
        r.add("info", info);
        all_ok = all_ok && !dm.contradiction;
        finish(r, plan.seed, cfg.tol);
      } catch (const std::exception& e) {
        r = error_record(rc.id, -1, Eigen::VectorXd(), "d_minimality", e.what(), plan.seed, cfg.tol);
        any_failed = true;
      }
      result.records.push_back(std::move(r));
    }
  }
  result.exit_code = any_failed ? 3 : (all_ok ? 0 : 1);
  return result;
}

void write_report(const RunResult& result, const RunConfig& cfg) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.out.empty() && cfg.out != "-") {
    file.open(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot write '" + cfg.out + "'");
    os = &file;
  }
  if (cfg.format == "csv") {
    *os << csv_header() << '\n';
    for (const auto& r : result.records) *os << csv_line(r) << '\n';
  } else {
    for (const auto& r : result.records) *os << r.json() << '\n';
  }
  os->flush();
}

std::string explain(const std::string& id) {
  static const std::map<std::string, std::string> text = {
      {"theorem_V",
       "delta_m^+(n_1..n_k) <= ambient delta_m^+(n_1..n_k) + (k-1)/(2k) * M(s), s = sum n_i, where M(s) is\n"
       "|H_D|^2 when s = d and H_script(s)^2 otherwise. Run for every non-decreasing tuple with k >= 2, s <= d.\n"
       "Diagnostics at the maximizing tuple: cross terms of h between blocks, spread of the block mean\n"
       "curvatures, mean curvature deficit, and ambient attainment."},
      {"curvature_bound",
       "theorem_V with the ambient term replaced by (c/2)(s^2 - sum n_i^2), c an upper bound on ambient\n"
       "sectional curvature (--bound-c, default the model maximum)."},
      {"chen_type",
       "delta(n_1..n_k) <= d^2 (d+k-1-s) / (2(d+k-s)) |H_D|^2 + (c/2)[d(d-1) - sum n_i(n_i - 1)],\n"
       "for every non-decreasing tuple with k >= 1 and s <= d."},
      {"supplement",
       "delta_m^-(k) aggregate <= (k-1)/(2k(k+1)) |H_D|^2 + ambient delta_m^+(k+1) aggregate, k = 2..d-1.\n"
       "Diagnostics use the minimizing tuple extended by its complement in D."},
      {"mixed_scalar",
       "S_m(D, D_perp) <= |H|^2 / 4 + ambient S_m over the image of D and D_perp, with H the full mean\n"
       "curvature vector of M. Info fields report |H_D|^2 and |H_perp|^2 alongside."},
      {"holomorphic",
       "delta_h^+(k) <= ambient delta_h^+(k) + (k-1)/(4k) * M(2k), k = 2..d/2, with M as in theorem_V."},
      {"corollary_C03",
       "Flat ambient only: Delta_bar(s) <= M(s) for s = 2..d, where Delta_bar(s) is the largest\n"
       "2k/(k-1) delta_m^+(n_1..n_k) over tuples with sum n_i = s."},
      {"d_minimality",
       "Flat ambient only. One record per chart: if |H_D| vanishes at every sampled point then every\n"
       "witness (full-partition delta_m^+, aggregate delta_m^-, S_m(D, D_perp), delta_h^+(d/2)) must vanish;\n"
       "a non-zero witness is reported as a contradiction."},
      {"tau", "Scalar curvature of D: sum over a != b of K(e_a, e_b) in an orthonormal D-frame."},
      {"S_m", "Mixed scalar curvature S_m(D, D_perp)."},
      {"delta", "delta:n1,..,nk  (tau_D - min sum tau(V_i)) / 2 over orthogonal V_i in D with dim V_i = n_i."},
      {"delta_hat", "delta_hat:n1,..,nk  (tau_D - max sum tau(V_i)) / 2."},
      {"delta_m", "delta_m:+:n1,..,nk  max (or min with -) of the mutual curvature over orthogonal tuples in D."},
      {"delta_m_agg", "delta_m_agg:+:k  max of delta_m^+ over k-part tuples with sum <= d (min of delta_m^- with -)."},
      {"delta_h", "delta_h:+:k  max (or min) of sum_{i<j} K_h(sigma_i, sigma_j) over k orthogonal J-planes in D."},
      {"H_script", "H_script:s  max |H_V| over s-dimensional V in D; s = d gives |H_D|."},
      {"Delta", "Delta:n1,..,nk  2k/(k-1) delta_m^+(n1..nk)."},
      {"Delta_bar", "Delta_bar:s  max of Delta over tuples with k >= 2 and sum s."},
  };
  if (auto it = text.find(id); it != text.end()) return it->second;
  try {
    CatalogEntry e = make_catalog_entry(id);
    std::string s = e.id() + ": " + e.doc + "\n";
    for (const auto& x : e.expected) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "  %s = %.17g (%s)\n", x.quantity.c_str(), x.value, x.source.c_str());
      s += buf;
    }
    return s;
  } catch (const ConfigError&) {
  }
  throw ConfigError("nothing to explain for '" + id + "'");
}

}  // namespace crcurv
