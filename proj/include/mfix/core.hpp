#pragma once

// Domain types shared by every module: monotonicity signatures, points of the
// product space X = X_1 x ... x X_N, component metrics, comparison functions
// and the partially monotone system itself.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mfix/errors.hpp"

namespace mfix {

using Vector = std::vector<double>;
using DimensionProfile = std::vector<std::size_t>;

enum class Monotonicity : std::uint8_t { Increasing, Decreasing };

/// Declared direction of every T_i in every variable. Entry (i, j) is the
/// direction of T_i in x_j. Constant dependence must still be declared.
class MonotoneSignature {
 public:
  MonotoneSignature(std::size_t order, std::vector<Monotonicity> row_major);

  static MonotoneSignature from_rows(
      const std::vector<std::vector<Monotonicity>>& rows);
  static MonotoneSignature all_increasing(std::size_t order);

  /// Literal form: rows separated by '/', one character per entry,
  /// '+' for Increasing and '-' for Decreasing ("++-/-++/---").
  static MonotoneSignature parse(std::string_view literal);

  std::size_t order() const noexcept { return order_; }
  Monotonicity operator()(std::size_t i, std::size_t j) const;
  std::span<const Monotonicity> row(std::size_t i) const;
  std::string to_string() const;

  friend bool operator==(const MonotoneSignature&,
                         const MonotoneSignature&) = default;

 private:
  std::size_t order_;
  std::vector<Monotonicity> entries_;
};

/// An element of the product space. Every component is a nonempty vector of
/// finite reals.
class ProductPoint {
 public:
  ProductPoint() = default;
  explicit ProductPoint(std::vector<Vector> components);

  static ProductPoint filled(const DimensionProfile& profile, double value);
  static ProductPoint from_flat(std::span<const double> flat,
                                const DimensionProfile& profile);

  std::size_t size() const noexcept { return components_.size(); }
  const Vector& operator[](std::size_t j) const { return components_[j]; }
  const std::vector<Vector>& components() const noexcept {
    return components_;
  }
  DimensionProfile profile() const;
  Vector flatten() const;

  friend bool operator==(const ProductPoint&, const ProductPoint&) = default;

 private:
  std::vector<Vector> components_;
};

/// Throws StructuralError unless both points have the same profile.
void require_same_profile(const ProductPoint& x, const ProductPoint& y);

/// Entrywise order on a single component.
bool vector_leq(std::span<const double> a, std::span<const double> b);

/// Product order: x <= y iff every component of x is entrywise <= the
/// corresponding component of y. Exact comparison, no tolerance.
bool product_leq(const ProductPoint& x, const ProductPoint& y);

enum class MetricKind : std::uint8_t { Supremum, Euclidean };

std::string_view to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);

/// Per-component metrics d_j and the product metric d = max_j d_j.
class MetricProfile {
 public:
  MetricProfile() = default;
  explicit MetricProfile(std::vector<MetricKind> kinds);
  static MetricProfile uniform(std::size_t order, MetricKind kind);

  std::size_t size() const noexcept { return kinds_.size(); }
  MetricKind kind(std::size_t j) const { return kinds_.at(j); }
  const std::vector<MetricKind>& kinds() const noexcept { return kinds_; }

  double component(std::size_t j, std::span<const double> a,
                   std::span<const double> b) const;
  double distance(const ProductPoint& x, const ProductPoint& y) const;

  friend bool operator==(const MetricProfile&, const MetricProfile&) = default;

 private:
  std::vector<MetricKind> kinds_;
};

double component_distance(MetricKind kind, std::span<const double> a,
                          std::span<const double> b);

/// Product metric with the supremum metric on every component.
double product_metric(const ProductPoint& x, const ProductPoint& y);
double product_metric(const ProductPoint& x, const ProductPoint& y,
                      const MetricProfile& metric);

/// Parameters of the sampled check applied to custom comparison functions.
struct DecayCheck {
  double t_max = 100.0;
  std::size_t samples = 64;
  std::size_t iterations = 10000;
  double epsilon = 1e-6;
};

/// A comparison function: nondecreasing on [0, inf) with phi^n(t) -> 0.
class ComparisonFunction {
 public:
  enum class Kind : std::uint8_t { Linear, Log, Rational, Custom };

  static ComparisonFunction linear(double alpha);
  static ComparisonFunction log();
  static ComparisonFunction rational();
  /// Rejects `fn` with ValidationError unless it passes the sampled
  /// monotonicity and iterate-decay check.
  static ComparisonFunction custom(std::function<double(double)> fn,
                                   std::string name = "custom",
                                   const DecayCheck& check = {});

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  std::string describe() const;

  double operator()(double t) const;
  double iterate(double t, std::size_t n) const;

 private:
  ComparisonFunction(Kind kind, double alpha,
                     std::function<double(double)> fn, std::string name);

  Kind kind_;
  double alpha_;
  std::function<double(double)> fn_;
  std::string name_;
};

/// phi applied n times to t; n = 0 returns t. Rejects t < 0.
double phi_iterate(const ComparisonFunction& phi, double t, std::size_t n);

/// Sampled check of monotonicity and phi^K(t) < epsilon.
bool passes_decay_check(const std::function<double(double)>& fn,
                        const DecayCheck& check);

/// T_i : X -> X_i, evaluated on a full point.
using ComponentMap = std::function<Vector(const ProductPoint&)>;

/// The operators T_1..T_N with their declared signature, dimension profile
/// and component metrics.
class PartiallyMonotoneSystem {
 public:
  PartiallyMonotoneSystem(MonotoneSignature signature,
                          std::vector<ComponentMap> operators,
                          DimensionProfile profile,
                          MetricProfile metric = {});

  std::size_t order() const noexcept { return signature_.order(); }
  const MonotoneSignature& signature() const noexcept { return signature_; }
  const DimensionProfile& profile() const noexcept { return profile_; }
  const MetricProfile& metric() const noexcept { return metric_; }

  /// Throws StructuralError if `x` does not match the dimension profile.
  void check_point(const ProductPoint& x) const;

  /// T_i(x). Throws StructuralError on a wrong output dimension and
  /// NumericalError (carrying i) on a non-finite output.
  Vector evaluate(std::size_t i, const ProductPoint& x) const;

  /// T(x) = (T_1(x), ..., T_N(x)).
  ProductPoint apply(const ProductPoint& x) const;

  double distance(const ProductPoint& x, const ProductPoint& y) const {
    return metric_.distance(x, y);
  }

 private:
  MonotoneSignature signature_;
  std::vector<ComponentMap> operators_;
  DimensionProfile profile_;
  MetricProfile metric_;
};

}  // namespace mfix
