#include "crcurv/chart_file.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "crcurv/errors.hpp"
#include "crcurv/geometry.hpp"

namespace crcurv {

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> split(const std::string& line, std::size_t limit = std::string::npos) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size() && out.size() < limit) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

[[noreturn]] void fail(const std::string& msg, int line, int column) {
  throw SyntaxError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg, 0, line,
                    column);
}

double to_double(const Token& t, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(t.text, &used);
    if (used == t.text.size()) return v;
  } catch (const std::exception&) {
  }
  fail("expected a number, got '" + t.text + "'", line, t.column);
}

int to_int(const std::string& s, int line, int column) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail("expected an integer, got '" + s + "'", line, column);
}

/// key=value tokens after the keyword.
std::map<std::string, Token> keyvals(const std::vector<Token>& toks, int line) {
  std::map<std::string, Token> kv;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto eq = toks[i].text.find('=');
    if (eq == std::string::npos || eq == 0) fail("expected key=value, got '" + toks[i].text + "'", line, toks[i].column);
    const std::string key = toks[i].text.substr(0, eq);
    if (kv.count(key)) fail("duplicate key '" + key + "'", line, toks[i].column);
    kv[key] = {toks[i].text.substr(eq + 1), toks[i].column + static_cast<int>(eq) + 1};
  }
  return kv;
}

}  // namespace

std::pair<Chart, AmbientSpace> parse_chart_text(const std::string& text, const std::string& name) {
  std::optional<AmbientSpace> amb;
  int d = -1, l = -1, q = -1, dims_line = 0;
  std::map<int, std::pair<double, double>> domain;
  struct Comp {
    std::string src;
    int line, column;
  };
  std::vector<Comp> comps;

  std::istringstream in(text);
  std::string raw;
  int ln = 0;
  while (std::getline(in, raw)) {
    ++ln;
    std::string line = raw.substr(0, raw.find('#'));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto head = split(line, 1);
    if (head.empty()) continue;
    const std::string& kw = head[0].text;
    if (kw == "component") {
      const std::size_t start = head[0].column - 1 + kw.size();
      std::size_t s = line.find_first_not_of(" \t", start);
      if (s == std::string::npos) fail("empty component", ln, static_cast<int>(start) + 1);
      comps.push_back({line.substr(s), ln, static_cast<int>(s) + 1});
      continue;
    }
    const auto toks = split(line);
    if (kw == "ambient") {
      if (amb) fail("ambient declared twice", ln, head[0].column);
      if (toks.size() < 2) fail("ambient needs a model", ln, head[0].column + static_cast<int>(kw.size()));
      const std::string model = toks[1].text;
      auto kv = keyvals(std::vector<Token>(toks.begin() + 1, toks.end()), ln);
      if (!kv.count("q")) fail("ambient needs q=<int>", ln, toks.back().column);
      q = to_int(kv["q"].text, ln, kv["q"].column);
      if (q < 1) fail("q must be positive", ln, kv["q"].column);
      if (model == "flat") {
        if (kv.size() != 1) fail("flat ambient takes only q", ln, toks[1].column);
        amb = make_flat_complex_ambient(q);
      } else if (model == "holomorphic") {
        if (!kv.count("c")) fail("holomorphic ambient needs c=<float>", ln, toks.back().column);
        if (kv.size() != 2) fail("holomorphic ambient takes q and c", ln, toks[1].column);
        const double c = to_double(kv["c"], ln);
        amb = make_const_holomorphic_ambient(q, c);
      } else {
        fail("unknown ambient model '" + model + "'", ln, toks[1].column);
      }
    } else if (kw == "dims") {
      if (d >= 0) fail("dims declared twice", ln, head[0].column);
      auto kv = keyvals(toks, ln);
      if (!kv.count("d") || !kv.count("l") || kv.size() != 2) fail("dims needs d=<int> l=<int>", ln, head[0].column);
      d = to_int(kv["d"].text, ln, kv["d"].column);
      l = to_int(kv["l"].text, ln, kv["l"].column);
      if (d <= 0 || l <= 0) fail("dims must be positive", ln, head[0].column);
      dims_line = ln;
    } else if (kw == "domain") {
      if (toks.size() != 4) fail("domain needs u<i> <lo> <hi>", ln, head[0].column);
      const Token& var = toks[1];
      if (var.text.size() < 2 || var.text[0] != 'u') fail("expected a variable u<i>", ln, var.column);
      const int i = to_int(var.text.substr(1), ln, var.column + 1);
      if (i < 1) fail("variables are numbered from 1", ln, var.column);
      if (domain.count(i)) fail("domain for " + var.text + " given twice", ln, var.column);
      const double lo = to_double(toks[2], ln), hi = to_double(toks[3], ln);
      if (!(lo < hi)) fail("domain needs lo < hi", ln, toks[2].column);
      domain[i] = {lo, hi};
    } else {
      fail("unknown keyword '" + kw + "'", ln, head[0].column);
    }
  }
  const int end = ln + 1;
  if (!amb) fail("missing ambient line", end, 1);
  if (d < 0) fail("missing dims line", end, 1);
  const int m = d + l;
  if (domain.empty() || domain.rbegin()->first != static_cast<int>(domain.size()))
    fail("domain variables must be u1..uN without gaps", end, 1);
  if (static_cast<int>(domain.size()) != m)
    throw CRSplitError("declared dims d=" + std::to_string(d) + " l=" + std::to_string(l) + " do not match the " +
                       std::to_string(domain.size()) + " chart variables");
  if (static_cast<int>(comps.size()) != 2 * q)
    fail("expected " + std::to_string(2 * q) + " components, got " + std::to_string(comps.size()), end, 1);
  if (m >= 2 * q) fail("d + l must be less than 2q", dims_line, 1);

  std::vector<std::pair<double, double>> box;
  for (const auto& [i, iv] : domain) box.push_back(iv);
  std::vector<std::string> srcs;
  for (const auto& c : comps) {
    try {
      parse_expression(c.src, m);
    } catch (const SyntaxError& e) {
      const int col = c.column + static_cast<int>(e.offset());
      throw SyntaxError("line " + std::to_string(c.line) + ", column " + std::to_string(col) + ": " + e.what(),
                        e.offset(), c.line, col);
    }
    srcs.push_back(c.src);
  }
  Chart chart = make_chart(name, d, l, srcs, std::move(box));
  const Eigen::VectorXd u0 = chart.center();
  point_geometry(*amb, chart, std::span<const double>(u0.data(), u0.size()), ToleranceConfig{});  // ImmersionError / CRSplitError on a bad declaration
  return {std::move(chart), *amb};
}

std::pair<Chart, AmbientSpace> load_chart_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open chart file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_chart_text(ss.str(), path);
}

}  // namespace crcurv
