#include "crcurv/report.hpp"

#include <cmath>
#include <cstdio>

namespace crcurv {

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

Record& Record::put(const std::string& key, std::string text) {
  fields_.emplace_back(key, std::move(text));
  return *this;
}

Record& Record::add(const std::string& key, double v) { return put(key, json_number(v)); }
Record& Record::add(const std::string& key, long long v) { return put(key, std::to_string(v)); }
Record& Record::add(const std::string& key, unsigned long long v) { return put(key, std::to_string(v)); }
Record& Record::add(const std::string& key, bool v) { return put(key, v ? "true" : "false"); }
Record& Record::add(const std::string& key, const std::string& v) { return put(key, json_string(v)); }
Record& Record::add_null(const std::string& key) { return put(key, "null"); }

Record& Record::add(const std::string& key, const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_number(v[i]);
  return put(key, s + "]");
}

Record& Record::add(const std::string& key, const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return put(key, s + "]");
}

Record& Record::add(const std::string& key, const std::vector<std::pair<std::string, double>>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_string(v[i].first) + ":" + json_number(v[i].second);
  return put(key, s + "}");
}

Record& Record::add(const std::string& key, const std::vector<std::pair<std::string, std::string>>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_string(v[i].first) + ":" + json_string(v[i].second);
  return put(key, s + "}");
}

std::string Record::json() const {
  std::string s = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i)
    s += (i ? "," : "") + json_string(fields_[i].first) + ":" + fields_[i].second;
  return s + "}";
}

std::string Record::raw(const std::string& key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return v;
  return "";
}

namespace {
const char* const kColumns[] = {"chart", "point", "kind", "name", "params", "value", "lhs", "rhs",
                                "slack", "pass", "equality", "diagnostics_ok", "gap", "seed"};

std::string csv_cell(std::string v) {
  if (v.size() >= 2 && v.front() == '"') v = v.substr(1, v.size() - 2);
  if (v.find_first_of(",\"") != std::string::npos) {
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v;
}
}  // namespace

std::string csv_header() {
  std::string s;
  for (const char* c : kColumns) s += (s.empty() ? "" : ",") + std::string(c);
  return s;
}

std::string csv_line(const Record& r) {
  std::string s;
  bool first = true;
  for (const char* c : kColumns) {
    s += (first ? "" : ",") + csv_cell(r.raw(c));
    first = false;
  }
  return s;
}

}  // namespace crcurv
