#include "mfix/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace mfix {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_doubles(std::span<const double> v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += format_double(v[k]);
  }
  return out;
}

Report::Report(std::string kind) : kind_(std::move(kind)) {}

Report& Report::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : header_) {
    if (k == key) {
      v = value;
      return *this;
    }
  }
  header_.emplace_back(key, value);
  return *this;
}

Report& Report::set(const std::string& key, const char* value) {
  return set(key, std::string(value));
}

Report& Report::set(const std::string& key, double value) {
  return set(key, format_double(value));
}

Report& Report::set(const std::string& key, std::size_t value) {
  return set(key, std::to_string(value));
}

Report& Report::set(const std::string& key, bool value) {
  return set(key, std::string(value ? "true" : "false"));
}

Report& Report::set(const std::string& key, std::span<const double> values) {
  return set(key, format_doubles(values));
}

void Report::columns(std::vector<std::string> names) {
  columns_ = std::move(names);
}

void Report::row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw std::logic_error("report row width differs from the column count");
  }
  rows_.push_back(std::move(cells));
}

void Report::row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(std::move(cells));
}

std::string Report::get(const std::string& key) const {
  for (const auto& [k, v] : header_) {
    if (k == key) return v;
  }
  return {};
}

std::string Report::str() const {
  std::string out = "# mfix " + kind_ + "\n";
  for (const auto& [k, v] : header_) out += k + " = " + v + "\n";
  if (!columns_.empty()) {
    out += "# columns:";
    for (const auto& c : columns_) out += " " + c;
    out += "\n";
    for (const auto& r : rows_) {
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (k) out += ' ';
        out += r[k];
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace mfix
