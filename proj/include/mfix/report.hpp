#pragma once

// Line-oriented reports: a "key = value" header followed by an optional
// whitespace-separated columnar body introduced by a "# columns:" line.
// Floating-point values are printed with 17 significant digits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mfix {

std::string format_double(double v);
std::string format_doubles(std::span<const double> v);

class Report {
 public:
  explicit Report(std::string kind);

  Report& set(const std::string& key, const std::string& value);
  Report& set(const std::string& key, const char* value);
  Report& set(const std::string& key, double value);
  Report& set(const std::string& key, std::size_t value);
  Report& set(const std::string& key, bool value);
  Report& set(const std::string& key, std::span<const double> values);

  void columns(std::vector<std::string> names);
  void row(std::vector<std::string> cells);
  void row(std::span<const double> values);

  const std::string& kind() const noexcept { return kind_; }
  /// Value stored for `key`, or an empty string.
  std::string get(const std::string& key) const;
  std::size_t row_count() const noexcept { return rows_.size(); }

  std::string str() const;

 private:
  std::string kind_;
  std::vector<std::pair<std::string, std::string>> header_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace mfix
