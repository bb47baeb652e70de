#include "crcurv/chart.hpp"

#include "crcurv/errors.hpp"

namespace crcurv {

Eigen::VectorXd Chart::center() const {
  Eigen::VectorXd c(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) c[i] = 0.5 * (domain[i].first + domain[i].second);
  return c;
}

bool Chart::contains(std::span<const double> u, double margin) const {
  if (u.size() != domain.size()) return false;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] - margin < domain[i].first || u[i] + margin > domain[i].second) return false;
  return true;
}

Chart make_chart(std::string name, int d, int l, const std::vector<std::string>& components,
                 std::vector<std::pair<double, double>> domain) {
  if (d <= 0 || l <= 0) throw DimensionError("CR dimensions must satisfy d > 0 and l > 0");
  if (components.size() % 2 != 0) throw DimensionError("a chart into C^q needs an even number of components");
  if (static_cast<int>(domain.size()) != d + l) throw DimensionError("domain box must have d + l intervals");
  if (static_cast<int>(components.size()) < d + l + 1) throw DimensionError("chart needs codimension >= 1");
  for (const auto& [lo, hi] : domain)
    if (!(lo < hi)) throw DimensionError("domain interval must have lo < hi");
  Chart c;
  c.name = std::move(name);
  c.d = d;
  c.l = l;
  c.domain = std::move(domain);
  for (const auto& src : components) c.components.push_back(parse_expression(src, d + l));
  return c;
}

ChartJets evaluate_chart(const Chart& chart, std::span<const double> u) {
  const int m = chart.m();
  const int n = chart.ambient_dim();
  if (static_cast<int>(u.size()) != m) throw DimensionError("parameter point has wrong dimension");
  ChartJets out;
  out.value.resize(n);
  out.jacobian.resize(n, m);
  out.hessian.assign(static_cast<std::size_t>(m) * m, Eigen::VectorXd(n));
  for (int c = 0; c < n; ++c) {
    const Jet2 j = chart.components[c].eval_jet2(u);
    out.value[c] = j.value();
    for (int a = 0; a < m; ++a) {
      out.jacobian(c, a) = j.gradient(a);
      for (int b = 0; b < m; ++b) out.hessian[a * m + b][c] = j.hessian(a, b);
    }
  }
  return out;
}

}  // namespace crcurv
