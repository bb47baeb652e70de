#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crcurv/ambient.hpp"
#include "crcurv/chart.hpp"

namespace crcurv {

/// A closed-form value the entry is expected to reproduce at every point.
struct ExpectedValue {
  std::string quantity;  // norm_H_sq, norm_H_D_sq, S_m_D_perp, tau_D, sectional_D
  double value;
  std::string source;
};

struct CatalogEntry {
  std::string name;            // e.g. "sphere_in_Cq"
  std::vector<int> params;     // constructor parameters
  Chart chart;
  AmbientSpace ambient;
  std::string doc;
  std::vector<ExpectedValue> expected;

  std::string id() const;      // "sphere_in_Cq:2,1,2"
};

/// Unit sphere S^{d+l}(1) in C^q, angular chart; q must be minimal.
CatalogEntry sphere_in_Cq(int d, int l, int q);
/// T^{q-1} x C in C^q: d = 2, l = q - 1.
CatalogEntry flat_torus(int q);
/// C^{d/2} x R^l in C^q.
CatalogEntry totally_geodesic_plane(int d, int l, int q);
/// Graph chart of a piece of S^{d+2}(1) in C^{d/2+2} with coordinate-integrable D, D-perp.
CatalogEntry product_sphere_chart(int d, int l, int q);
/// (z, z^2/2) x unit circle in C^3: d = 2, l = 1, D-minimal.
CatalogEntry holomorphic_product();

/// Builds an entry from "name" or "name:p1,p2,..." (ConfigError otherwise).
CatalogEntry make_catalog_entry(const std::string& spec);

/// The default instances, in campaign order.
std::vector<CatalogEntry> catalog();

}  // namespace crcurv
