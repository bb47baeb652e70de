#include "crcurv/catalog.hpp"

#include <sstream>

#include "crcurv/errors.hpp"

namespace crcurv {

namespace {

std::string u(int i) { return "u" + std::to_string(i); }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::string CatalogEntry::id() const { return params.empty() ? name : name + ":" + join(params); }

CatalogEntry sphere_in_Cq(int d, int l, int q) {
  const int n = d + l;
  if (d <= 0 || l <= 0 || d % 2 != 0) throw ConfigError("sphere_in_Cq needs even d > 0 and l > 0");
  if (2 * q < n + 1 || 2 * (q - 1) >= n + 1) throw ConfigError("sphere_in_Cq needs the minimal q with 2q >= d+l+1");
  // S^n spans R^{n+1}; the tangent part of J on D-perp has rank 2q - (n+1) complementary directions.
  const bool odd_gap = n + 1 == 2 * q - 1;
  if (!odd_gap && l != 1) throw ConfigError("sphere_in_Cq with d+l+1 = 2q is a real hypersurface: l must be 1");
  if (odd_gap && l != 2) throw ConfigError("sphere_in_Cq with d+l+2 = 2q needs l = 2");

  std::vector<std::string> x(2 * q, "0");
  // x_{n+1} = cos u1; x_{n+2-i} = sin u1 ... sin u_{i-1} cos u_i; x2, x1 close the chain.
  std::string prefix;
  for (int i = 1; i <= n - 1; ++i) {
    x[n + 1 - i] = prefix + "cos(" + u(i) + ")";
    prefix += "sin(" + u(i) + ")*";
  }
  x[1] = prefix + "sin(" + u(n) + ")";
  x[0] = prefix + "cos(" + u(n) + ")";

  std::vector<std::pair<double, double>> box(n, {0.5, 2.6});
  if (odd_gap) box[0] = {1.5207963267948966, 1.6207963267948966};  // pi/2 -+ 0.05 keeps |x_{2q-1}| <= 0.05

  CatalogEntry e;
  e.name = "sphere_in_Cq";
  e.params = {d, l, q};
  e.chart = make_chart("sphere_in_Cq:" + join(e.params), d, l, x, box);
  e.ambient = make_flat_complex_ambient(q);
  std::ostringstream doc;
  doc << "Unit sphere S^" << n << "(1) in C^" << q << ", angular chart. Umbilic with h(X,Y) = <X,Y> nu, "
      << "so every sectional curvature is 1, |H|^2 = " << n * n << ", |H_D|^2 = " << d * d
      << ", S_m(D,D_perp) = " << d * l << ".";
  if (odd_gap) doc << " The first angle is kept near pi/2 so that D_perp stays totally real.";
  e.doc = doc.str();
  e.expected = {{"norm_H_sq", static_cast<double>(n * n), "umbilic sphere"},
                {"norm_H_D_sq", static_cast<double>(d * d), "umbilic sphere"},
                {"norm_H_perp_sq", static_cast<double>(l * l), "umbilic sphere"},
                {"S_m_D_perp", static_cast<double>(d * l), "unit sectional curvature"},
                {"tau_D", static_cast<double>(d * (d - 1)), "unit sectional curvature"}};
  return e;
}

CatalogEntry flat_torus(int q) {
  if (q < 2) throw ConfigError("flat_torus needs q >= 2");
  std::vector<std::string> x;
  std::vector<std::pair<double, double>> box;
  for (int i = 1; i <= q - 1; ++i) {
    x.push_back("cos(" + u(i) + ")");
    x.push_back("sin(" + u(i) + ")");
    box.emplace_back(0.3, 2.8);
  }
  x.push_back(u(q));
  x.push_back(u(q + 1));
  box.emplace_back(-1.0, 1.0);
  box.emplace_back(-1.0, 1.0);
  // variables: angles u1..u_{q-1} (D-perp), flat pair u_q, u_{q+1} (D)
  CatalogEntry e;
  e.name = "flat_torus";
  e.params = {q};
  e.chart = make_chart("flat_torus:" + std::to_string(q), 2, q - 1, x, box);
  e.ambient = make_flat_complex_ambient(q);
  e.doc = "Product of q-1 unit circles with a complex line, T^" + std::to_string(q - 1) + " x C in C^" +
          std::to_string(q) + ". Intrinsically flat; each circle is totally real and contributes a unit mean "
          "curvature vector, the complex line is totally geodesic.";
  e.expected = {{"norm_H_sq", static_cast<double>(q - 1), "unit circles"},
                {"norm_H_D_sq", 0.0, "totally geodesic factor"},
                {"S_m_D_perp", 0.0, "flat"},
                {"tau_D", 0.0, "flat"}};
  return e;
}

CatalogEntry totally_geodesic_plane(int d, int l, int q) {
  if (d <= 0 || l <= 0 || d % 2 != 0) throw ConfigError("totally_geodesic_plane needs even d > 0 and l > 0");
  if (d / 2 + l > q) throw ConfigError("totally_geodesic_plane needs d/2 + l <= q");
  std::vector<std::string> x(2 * q, "0");
  for (int i = 0; i < d; ++i) x[i] = u(i + 1);
  for (int j = 0; j < l; ++j) x[d + 2 * j] = u(d + j + 1);
  CatalogEntry e;
  e.name = "totally_geodesic_plane";
  e.params = {d, l, q};
  e.chart = make_chart("totally_geodesic_plane:" + join(e.params), d, l, x,
                       std::vector<std::pair<double, double>>(d + l, {-1.0, 1.0}));
  e.ambient = make_flat_complex_ambient(q);
  e.doc = "Linear C^" + std::to_string(d / 2) + " x R^" + std::to_string(l) + " in C^" + std::to_string(q) +
          ": h = 0, every invariant vanishes.";
  e.expected = {{"norm_H_sq", 0.0, "linear"}, {"norm_H_D_sq", 0.0, "linear"}, {"S_m_D_perp", 0.0, "linear"},
                {"tau_D", 0.0, "linear"}};
  return e;
}

CatalogEntry product_sphere_chart(int d, int l, int q) {
  if (d <= 0 || d % 2 != 0 || l != 2 || 2 * q != d + 4)
    throw ConfigError("product_sphere_chart needs even d > 0, l = 2 and q = d/2 + 2");
  const int n = d + l;
  // x1 = sqrt(1 - |u|^2), x2 = u_{d+1}, x_{3..d+2} = u_1..u_d, x_{d+3} = u_{d+2}
  std::string r = "1";
  for (int i = 1; i <= n; ++i) r += " - " + u(i) + "^2";
  std::vector<std::string> x(2 * q, "0");
  x[0] = "sqrt(" + r + ")";
  x[1] = u(d + 1);
  for (int i = 1; i <= d; ++i) x[1 + i] = u(i);
  x[d + 2] = u(d + 2);
  std::vector<std::pair<double, double>> box(n, {-0.3, 0.3});
  box[n - 1] = {-0.04, 0.04};
  CatalogEntry e;
  e.name = "product_sphere_chart";
  e.params = {d, l, q};
  e.chart = make_chart("product_sphere_chart:" + join(e.params), d, l, x, box);
  e.ambient = make_flat_complex_ambient(q);
  e.doc = "Graph chart of a piece of S^" + std::to_string(n) + "(1) in C^" + std::to_string(q) +
          " around e_1, with D and D_perp along coordinate slices, so the domain is a product of two pieces. "
          "The last variable stays small so D_perp remains totally real.";
  e.expected = {{"norm_H_sq", static_cast<double>(n * n), "umbilic sphere"},
                {"norm_H_D_sq", static_cast<double>(d * d), "umbilic sphere"},
                {"norm_H_perp_sq", static_cast<double>(l * l), "umbilic sphere"},
                {"S_m_D_perp", static_cast<double>(d * l), "unit sectional curvature"},
                {"tau_D", static_cast<double>(d * (d - 1)), "unit sectional curvature"}};
  return e;
}

CatalogEntry holomorphic_product() {
  CatalogEntry e;
  e.name = "holomorphic_product";
  e.chart = make_chart("holomorphic_product", 2, 1,
                       {"u1", "u2", "0.5*(u1^2 - u2^2)", "u1*u2", "cos(u3)", "sin(u3)"},
                       {{-0.5, 0.5}, {-0.5, 0.5}, {0.3, 2.8}});
  e.ambient = make_flat_complex_ambient(3);
  e.doc = "The complex curve w = z^2/2 times a unit circle in C^3. Complex curves are minimal, so H_D = 0 "
          "although h on D does not vanish; D and D_perp are mixed totally geodesic.";
  e.expected = {{"norm_H_sq", 1.0, "unit circle"},
                {"norm_H_D_sq", 0.0, "complex curve"},
                {"S_m_D_perp", 0.0, "product"}};
  return e;
}

CatalogEntry make_catalog_entry(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<int> p;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        p.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("bad catalog parameter '" + item + "' in '" + spec + "'");
      }
    }
  }
  auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw ConfigError(name + " takes " + std::to_string(n) + " parameter(s), got " + std::to_string(p.size()));
  };
  if (name == "sphere_in_Cq") return need(3), sphere_in_Cq(p[0], p[1], p[2]);
  if (name == "flat_torus") return need(1), flat_torus(p[0]);
  if (name == "totally_geodesic_plane") return need(3), totally_geodesic_plane(p[0], p[1], p[2]);
  if (name == "product_sphere_chart") return need(3), product_sphere_chart(p[0], p[1], p[2]);
  if (name == "holomorphic_product") return need(0), holomorphic_product();
  throw ConfigError("unknown catalog chart '" + name + "'");
}

std::vector<CatalogEntry> catalog() {
  return {sphere_in_Cq(2, 1, 2),           sphere_in_Cq(2, 2, 3),      sphere_in_Cq(4, 1, 3),
          flat_torus(2),                   flat_torus(3),              totally_geodesic_plane(2, 1, 2),
          totally_geodesic_plane(4, 1, 3), product_sphere_chart(2, 2, 3), holomorphic_product()};
}

}  // namespace crcurv
