#pragma once

#include <string>
#include <utility>

#include "crcurv/ambient.hpp"
#include "crcurv/chart.hpp"

namespace crcurv {

/// Line-oriented chart format:
///   ambient flat q=<int> | ambient holomorphic q=<int> c=<float>
///   dims d=<int> l=<int>
///   domain u<i> <lo> <hi>      (one per variable)
///   component <expression>     (2q times, in coordinate order)
/// `#` starts a comment. The declared (d, l) is checked at the box center.
std::pair<Chart, AmbientSpace> parse_chart_text(const std::string& text, const std::string& name = "file");
std::pair<Chart, AmbientSpace> load_chart_file(const std::string& path);

}  // namespace crcurv
