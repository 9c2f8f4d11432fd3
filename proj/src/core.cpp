#include "mfix/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace mfix {

// ---------------------------------------------------------------------------
// MonotoneSignature

MonotoneSignature::MonotoneSignature(std::size_t order,
                                     std::vector<Monotonicity> row_major)
    : order_(order), entries_(std::move(row_major)) {
  if (order_ < 2) {
    throw StructuralError("signature order must be at least 2, got " +
                          std::to_string(order_));
  }
  if (entries_.size() != order_ * order_) {
    throw StructuralError("signature of order " + std::to_string(order_) +
                          " needs " + std::to_string(order_ * order_) +
                          " entries, got " + std::to_string(entries_.size()));
  }
}

MonotoneSignature MonotoneSignature::from_rows(
    const std::vector<std::vector<Monotonicity>>& rows) {
  std::vector<Monotonicity> flat;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) {
      throw StructuralError("signature matrix must be square");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return MonotoneSignature(rows.size(), std::move(flat));
}

MonotoneSignature MonotoneSignature::all_increasing(std::size_t order) {
  return MonotoneSignature(
      order, std::vector<Monotonicity>(order * order, Monotonicity::Increasing));
}

MonotoneSignature MonotoneSignature::parse(std::string_view literal) {
  std::vector<std::vector<Monotonicity>> rows(1);
  for (char c : literal) {
    switch (c) {
      case '+':
        rows.back().push_back(Monotonicity::Increasing);
        break;
      case '-':
        rows.back().push_back(Monotonicity::Decreasing);
        break;
      case '/':
        rows.emplace_back();
        break;
      case ' ':
      case '\t':
        break;
      default:
        throw StructuralError("invalid signature character '" +
                              std::string(1, c) + "' in \"" +
                              std::string(literal) + "\"");
    }
  }
  return from_rows(rows);
}

Monotonicity MonotoneSignature::operator()(std::size_t i, std::size_t j) const {
  if (i >= order_ || j >= order_) {
    throw StructuralError("signature index out of range");
  }
  return entries_[i * order_ + j];
}

std::span<const Monotonicity> MonotoneSignature::row(std::size_t i) const {
  if (i >= order_) {
    throw StructuralError("signature row " + std::to_string(i) +
                          " out of range for order " + std::to_string(order_));
  }
  return std::span<const Monotonicity>(entries_).subspan(i * order_, order_);
}

std::string MonotoneSignature::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < order_; ++i) {
    if (i > 0) out += '/';
    for (auto m : row(i)) out += m == Monotonicity::Increasing ? '+' : '-';
  }
  return out;
}

// ---------------------------------------------------------------------------
// ProductPoint

ProductPoint::ProductPoint(std::vector<Vector> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw StructuralError("a product point needs at least one component");
  }
  for (std::size_t j = 0; j < components_.size(); ++j) {
    if (components_[j].empty()) {
      throw StructuralError("component " + std::to_string(j) + " is empty");
    }
    for (double v : components_[j]) {
      if (!std::isfinite(v)) {
        throw NumericalError(
            "non-finite entry in component " + std::to_string(j), j);
      }
    }
  }
}

ProductPoint ProductPoint::filled(const DimensionProfile& profile,
                                  double value) {
  std::vector<Vector> comps;
  comps.reserve(profile.size());
  for (auto m : profile) comps.emplace_back(m, value);
  return ProductPoint(std::move(comps));
}

ProductPoint ProductPoint::from_flat(std::span<const double> flat,
                                     const DimensionProfile& profile) {
  std::size_t total = 0;
  for (auto m : profile) total += m;
  if (flat.size() != total) {
    throw StructuralError("flat vector has " + std::to_string(flat.size()) +
                          " entries, profile needs " + std::to_string(total));
  }
  std::vector<Vector> comps;
  comps.reserve(profile.size());
  std::size_t offset = 0;
  for (auto m : profile) {
    comps.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                       flat.begin() + static_cast<std::ptrdiff_t>(offset + m));
    offset += m;
  }
  return ProductPoint(std::move(comps));
}

DimensionProfile ProductPoint::profile() const {
  DimensionProfile p;
  p.reserve(components_.size());
  for (const auto& c : components_) p.push_back(c.size());
  return p;
}

Vector ProductPoint::flatten() const {
  Vector out;
  for (const auto& c : components_) out.insert(out.end(), c.begin(), c.end());
  return out;
}

void require_same_profile(const ProductPoint& x, const ProductPoint& y) {
  if (x.size() != y.size()) {
    throw StructuralError("points have " + std::to_string(x.size()) + " and " +
                          std::to_string(y.size()) + " components");
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].size() != y[j].size()) {
      throw StructuralError("component " + std::to_string(j) +
                            " dimension mismatch: " +
                            std::to_string(x[j].size()) + " vs " +
                            std::to_string(y[j].size()));
    }
  }
}

bool vector_leq(std::span<const double> a, std::span<const double> b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] <= b[k])) return false;
  }
  return true;
}

bool product_leq(const ProductPoint& x, const ProductPoint& y) {
  require_same_profile(x, y);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!vector_leq(x[j], y[j])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Metrics

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::Supremum ? "sup" : "euclidean";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "sup" || name == "supremum") return MetricKind::Supremum;
  if (name == "euclidean" || name == "l2") return MetricKind::Euclidean;
  throw ConfigError("unknown metric '" + std::string(name) +
                    "' (expected sup or euclidean)");
}

double component_distance(MetricKind kind, std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw StructuralError("component distance between vectors of length " +
                          std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  }
  if (kind == MetricKind::Supremum) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      d = std::max(d, std::abs(a[k] - b[k]));
    }
    return d;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

MetricProfile::MetricProfile(std::vector<MetricKind> kinds)
    : kinds_(std::move(kinds)) {}

MetricProfile MetricProfile::uniform(std::size_t order, MetricKind kind) {
  return MetricProfile(std::vector<MetricKind>(order, kind));
}

double MetricProfile::component(std::size_t j, std::span<const double> a,
                                std::span<const double> b) const {
  return component_distance(kinds_.at(j), a, b);
}

double MetricProfile::distance(const ProductPoint& x,
                               const ProductPoint& y) const {
  require_same_profile(x, y);
  if (x.size() != kinds_.size()) {
    throw StructuralError("metric profile has " +
                          std::to_string(kinds_.size()) +
                          " components, points have " +
                          std::to_string(x.size()));
  }
  double d = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    d = std::max(d, component(j, x[j], y[j]));
  }
  return d;
}

double product_metric(const ProductPoint& x, const ProductPoint& y) {
  return MetricProfile::uniform(x.size(), MetricKind::Supremum).distance(x, y);
}

double product_metric(const ProductPoint& x, const ProductPoint& y,
                      const MetricProfile& metric) {
  return metric.distance(x, y);
}

// ---------------------------------------------------------------------------
// Comparison functions

ComparisonFunction::ComparisonFunction(Kind kind, double alpha,
                                       std::function<double(double)> fn,
                                       std::string name)
    : kind_(kind), alpha_(alpha), fn_(std::move(fn)), name_(std::move(name)) {}

ComparisonFunction ComparisonFunction::linear(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ConfigError("linear comparison function needs 0 <= alpha < 1, got " +
                      std::to_string(alpha));
  }
  return ComparisonFunction(Kind::Linear, alpha, nullptr, "linear");
}

ComparisonFunction ComparisonFunction::log() {
  return ComparisonFunction(Kind::Log, 0.0, nullptr, "log");
}

ComparisonFunction ComparisonFunction::rational() {
  return ComparisonFunction(Kind::Rational, 0.0, nullptr, "rational");
}

ComparisonFunction ComparisonFunction::custom(std::function<double(double)> fn,
                                              std::string name,
                                              const DecayCheck& check) {
  if (!fn) throw ConfigError("custom comparison function is empty");
  if (!passes_decay_check(fn, check)) {
    throw ValidationError("comparison function '" + name +
                          "' failed the sampled monotonicity/decay check");
  }
  return ComparisonFunction(Kind::Custom, 0.0, std::move(fn), std::move(name));
}

std::string ComparisonFunction::describe() const {
  if (kind_ == Kind::Linear) {
    std::ostringstream os;
    os.precision(17);
    os << "linear(" << alpha_ << ")";
    return os.str();
  }
  return name_;
}

double ComparisonFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::Linear:
      return alpha_ * t;
    case Kind::Log:
      return std::log1p(t);
    case Kind::Rational:
      return t / (t + 1.0);
    case Kind::Custom:
      return fn_(t);
  }
  return 0.0;
}

double ComparisonFunction::iterate(double t, std::size_t n) const {
  for (std::size_t k = 0; k < n; ++k) t = (*this)(t);
  return t;
}

double phi_iterate(const ComparisonFunction& phi, double t, std::size_t n) {
  if (!(t >= 0.0)) {
    throw ConfigError("comparison functions are defined on [0, inf)");
  }
  return phi.iterate(t, n);
}

bool passes_decay_check(const std::function<double(double)>& fn,
                        const DecayCheck& check) {
  if (check.samples < 2) return false;
  std::vector<double> ts(check.samples);
  for (std::size_t k = 0; k < check.samples; ++k) {
    ts[k] = check.t_max * static_cast<double>(k) /
            static_cast<double>(check.samples - 1);
  }
  double prev = -1.0;
  for (double t : ts) {
    const double v = fn(t);
    if (!std::isfinite(v) || v < 0.0 || v < prev) return false;
    prev = v;
  }
  for (double t : ts) {
    double s = t;
    for (std::size_t n = 0; n < check.iterations && s >= check.epsilon; ++n) {
      s = fn(s);
    }
    if (!(s < check.epsilon) && t > 0.0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// PartiallyMonotoneSystem

PartiallyMonotoneSystem::PartiallyMonotoneSystem(
    MonotoneSignature signature, std::vector<ComponentMap> operators,
    DimensionProfile profile, MetricProfile metric)
    : signature_(std::move(signature)),
      operators_(std::move(operators)),
      profile_(std::move(profile)),
      metric_(std::move(metric)) {
  const std::size_t n = signature_.order();
  if (operators_.size() != n) {
    throw StructuralError("system of order " + std::to_string(n) + " has " +
                          std::to_string(operators_.size()) + " operators");
  }
  if (profile_.size() != n) {
    throw StructuralError("dimension profile has " +
                          std::to_string(profile_.size()) +
                          " entries for a system of order " +
                          std::to_string(n));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (profile_[j] == 0) {
      throw StructuralError("component " + std::to_string(j) +
                            " has dimension 0");
    }
    if (!operators_[j]) {
      throw StructuralError("operator " + std::to_string(j) + " is empty");
    }
  }
  if (metric_.size() == 0) {
    metric_ = MetricProfile::uniform(n, MetricKind::Supremum);
  } else if (metric_.size() != n) {
    throw StructuralError("metric profile has " +
                          std::to_string(metric_.size()) + " entries");
  }
}

void PartiallyMonotoneSystem::check_point(const ProductPoint& x) const {
  if (x.size() != profile_.size()) {
    throw StructuralError("point has " + std::to_string(x.size()) +
                          " components, system has " +
                          std::to_string(profile_.size()));
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].size() != profile_[j]) {
      throw StructuralError("component " + std::to_string(j) +
                            " has dimension " + std::to_string(x[j].size()) +
                            ", expected " + std::to_string(profile_[j]));
    }
  }
}

Vector PartiallyMonotoneSystem::evaluate(std::size_t i,
                                         const ProductPoint& x) const {
  if (i >= operators_.size()) {
    throw StructuralError("operator index " + std::to_string(i) +
                          " out of range");
  }
  check_point(x);
  Vector out = operators_[i](x);
  if (out.size() != profile_[i]) {
    throw StructuralError("operator " + std::to_string(i) + " returned " +
                          std::to_string(out.size()) + " entries, expected " +
                          std::to_string(profile_[i]));
  }
  for (double v : out) {
    if (!std::isfinite(v)) {
      throw NumericalError(
          "operator " + std::to_string(i) + " produced a non-finite value", i);
    }
  }
  return out;
}

ProductPoint PartiallyMonotoneSystem::apply(const ProductPoint& x) const {
  std::vector<Vector> comps;
  comps.reserve(order());
  for (std::size_t i = 0; i < order(); ++i) comps.push_back(evaluate(i, x));
  return ProductPoint(std::move(comps));
}

}  // namespace mfix
