#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "crcurv/catalog.hpp"
#include "crcurv/chart_file.hpp"
#include "crcurv/errors.hpp"
#include "crcurv/run.hpp"
#include "support.hpp"

using namespace crcurv;
using testing::Fixture;

namespace {

const char* kSphere3 =
    "# comment\n"
    "ambient flat q=2\n"
    "dims d=2 l=1\n"
    "domain u1 0.5 2.6\n"
    "domain u2 0.5 2.6\n"
    "domain u3 0.5 2.6\n"
    "component sin(u1)*sin(u2)*cos(u3)\n"
    "component sin(u1)*sin(u2)*sin(u3)\n"
    "component sin(u1)*cos(u2)\n"
    "component cos(u1)\n";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

double measure(PointAnalysis& pa, const std::string& q) {
  const PointGeom& g = pa.geom();
  if (q == "norm_H_sq") return g.H.squaredNorm();
  if (q == "norm_H_D_sq") return g.H_D.squaredNorm();
  if (q == "norm_H_perp_sq") return g.H_perp.squaredNorm();
  if (q == "S_m_D_perp") return pa.mixed_scalar();
  if (q == "tau_D") return pa.tau_D();
  FAIL("unknown quantity " << q);
  return 0;
}

RunConfig base(const std::string& chart) {
  RunConfig cfg;
  cfg.charts = {chart};
  cfg.inv.opt.restarts = 4;
  return cfg;
}

}  // namespace

TEST_CASE("catalog entries reproduce their closed-form values") {
  for (const CatalogEntry& e : catalog()) {
    INFO(e.id());
    CHECK(make_catalog_entry(e.id()).id() == e.id());
    const auto pts = sample_points(e.chart, 10, false, 3);
    for (const auto& u : pts) {
      Fixture f(e, u);
      for (const ExpectedValue& x : e.expected) {
        INFO(x.quantity);
        CHECK(std::abs(measure(*f.pa, x.quantity) - x.value) <= 1e-4 * std::max(1.0, std::abs(x.value)));
      }
    }
  }
}

TEST_CASE("catalog parameter validation") {
  CHECK_THROWS_AS(make_catalog_entry("sphere_in_Cq:2,1"), ConfigError);
  CHECK_THROWS_AS(make_catalog_entry("sphere_in_Cq:2,1,3"), ConfigError);
  CHECK_THROWS_AS(make_catalog_entry("sphere_in_Cq:3,1,3"), ConfigError);
  CHECK_THROWS_AS(make_catalog_entry("flat_torus:x"), ConfigError);
  CHECK_THROWS_AS(make_catalog_entry("nope"), ConfigError);
  CHECK(make_catalog_entry("sphere_in_Cq:6,1,4").chart.m() == 7);
  CHECK(make_catalog_entry("totally_geodesic_plane:6,2,5").chart.d == 6);
}

TEST_CASE("chart file") {
  const auto [chart, amb] = parse_chart_text(kSphere3);
  CHECK(chart.d == 2);
  CHECK(chart.l == 1);
  CHECK(amb.q() == 2);
  const CatalogEntry ref = sphere_in_Cq(2, 1, 2);
  const auto u = chart.center();
  const auto a = evaluate_chart(chart, std::span<const double>(u.data(), u.size()));
  const auto b = evaluate_chart(ref.chart, std::span<const double>(u.data(), u.size()));
  CHECK((a.value - b.value).norm() <= 1e-14);

  try {
    parse_chart_text(replace(kSphere3, "ambient flat q=2", "ambient flat"));
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() >= 1);
  }
  try {
    parse_chart_text(replace(kSphere3, "component cos(u1)", "component cos(u1) +"));
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 10);
    CHECK(e.column() > 10);
  }
  CHECK_THROWS_AS(parse_chart_text(replace(kSphere3, "d=2 l=1", "d=4 l=1")), CRSplitError);
  CHECK_THROWS_AS(parse_chart_text(replace(kSphere3, "domain u2", "domain u7")), SyntaxError);
  CHECK_THROWS_AS(parse_chart_text(replace(kSphere3, "component cos(u1)\n", "")), SyntaxError);
  CHECK_THROWS_AS(load_chart_file("/nonexistent/x.chart"), ConfigError);
}

TEST_CASE("sample points") {
  const Chart c = sphere_in_Cq(2, 1, 2).chart;
  const auto r = sample_points(c, 7, false, 5);
  CHECK(r.size() == 7);
  for (const auto& u : r) CHECK(c.contains(std::span<const double>(u.data(), u.size())));
  CHECK(sample_points(c, 7, false, 5) == r);
  CHECK(sample_points(c, 7, false, 6) != r);
  CHECK(sample_points(c, 27, true, 5).size() == 27);
  CHECK(sample_points(c, 30, true, 5).size() == 27);
}

TEST_CASE("report formatting") {
  CHECK(json_number(0.25) == "0.25");
  CHECK(json_number(0.1) == "0.10000000000000001");
  CHECK(json_number(std::nan("")) == "null");
  CHECK(json_number(INFINITY) == "null");
  CHECK(json_string("a\"b\n") == "\"a\\\"b\\n\"");
  Record r;
  r.add("chart", "x").add("pass", true).add("u", Eigen::VectorXd::Constant(2, 0.5)).add_null("gap");
  CHECK(r.json() == "{\"chart\":\"x\",\"pass\":true,\"u\":[0.5,0.5],\"gap\":null}");
  CHECK(r.raw("pass") == "true");
  CHECK(r.raw("missing").empty());
}

TEST_CASE("run: mixed scalar on S^3") {
  RunConfig cfg = base("sphere_in_Cq:2,1,2");
  cfg.checks = {"mixed_scalar"};
  const RunResult res = run(cfg);
  REQUIRE(res.records.size() == 9);
  CHECK(res.exit_code == 0);
  for (const Record& r : res.records) {
    CHECK(r.raw("kind") == "\"check\"");
    CHECK(std::abs(std::stod(r.raw("slack")) - 0.25) <= 1e-9);
    CHECK(r.raw("version") == "\"0.1.0\"");
  }
}

TEST_CASE("run: invariants and exit codes") {
  RunConfig cfg = base("flat_torus:2");
  cfg.points = 3;
  cfg.invariants = {"delta_m:+:1,1", "tau"};
  const RunResult res = run(cfg);
  REQUIRE(res.records.size() == 6);
  for (const Record& r : res.records) CHECK(std::abs(std::stod(r.raw("value"))) <= 1e-9);

  RunConfig bad = base("sphere_in_Cq:4,1,3");
  bad.points = 2;
  bad.checks = {"supplement"};
  CHECK(run(bad).exit_code == 1);

  RunConfig e1 = base("sphere_in_Cq:2,1,2");
  e1.checks = {"bogus"};
  CHECK_THROWS_AS(run(e1), ConfigError);
  RunConfig e2 = base("sphere_in_Cq:2,1,2");
  e2.invariants = {"delta_m:+:2,2"};
  CHECK_THROWS_AS(run(e2), ConfigError);
  RunConfig e3 = base("sphere_in_Cq:2,1,2");
  e3.checks = {"corollary_C03"};
  e3.bound_c = -1.0;
  CHECK_THROWS_AS(run(e3), BoundViolation);
  RunConfig e4 = base("sphere_in_Cq:2,1,2");
  e4.checks = {"all"};
  e4.points = 0;
  CHECK_THROWS_AS(run(e4), ConfigError);
}

TEST_CASE("run is deterministic across job counts") {
  RunConfig cfg = base("sphere_in_Cq:4,1,3");
  cfg.points = 3;
  cfg.checks = {"theorem_V", "holomorphic"};
  cfg.invariants = {"delta_m:-:1,2", "delta_h:+:2"};
  const RunResult a = run(cfg);
  cfg.jobs = 3;
  const RunResult b = run(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].json() == b.records[i].json());
  cfg.seed = 2;
  const RunResult c = run(cfg);
  CHECK(a.records[0].raw("u") != c.records[0].raw("u"));
}

TEST_CASE("explain") {
  CHECK(explain("theorem_V").find("delta") != std::string::npos);
  CHECK(explain("sphere_in_Cq:2,1,2").find("S^3") != std::string::npos);
  CHECK_THROWS_AS(explain("no_such_thing"), ConfigError);
}
