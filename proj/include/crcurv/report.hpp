#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace crcurv {

inline constexpr const char* kVersion = "0.1.0";

/// Formats a double with 17 significant digits; non-finite values become null.
std::string json_number(double v);
std::string json_string(const std::string& s);

/// One flat JSON object with fields kept in insertion order.
class Record {
 public:
  Record& add(const std::string& key, double v);
  Record& add(const std::string& key, long long v);
  Record& add(const std::string& key, int v) { return add(key, static_cast<long long>(v)); }
  Record& add(const std::string& key, unsigned long long v);
  Record& add(const std::string& key, bool v);
  Record& add(const std::string& key, const std::string& v);
  Record& add(const std::string& key, const char* v) { return add(key, std::string(v)); }
  Record& add(const std::string& key, const Eigen::VectorXd& v);
  Record& add(const std::string& key, const std::vector<int>& v);
  Record& add(const std::string& key, const std::vector<std::pair<std::string, double>>& v);
  Record& add(const std::string& key, const std::vector<std::pair<std::string, std::string>>& v);
  Record& add_null(const std::string& key);

  std::string json() const;
  /// Raw value text for `key`, or "" when absent.
  std::string raw(const std::string& key) const;

 private:
  Record& put(const std::string& key, std::string text);
  std::vector<std::pair<std::string, std::string>> fields_;
};

/// Fixed summary columns, one line per record.
std::string csv_header();
std::string csv_line(const Record& r);

}  // namespace crcurv
