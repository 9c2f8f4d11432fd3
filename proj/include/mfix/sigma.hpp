#pragma once

// Selector operators sigma_i, the induced orders, the symmetric composition of
// bivariate maps and the mixed monotone operator A with A_i = T_i o sigma_i.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mfix/core.hpp"

namespace mfix {

/// sigma_i for one signature row: component j of sigma_i(x, y) is x_j where
/// the row is Increasing and y_j where it is Decreasing.
class Selector {
 public:
  explicit Selector(std::span<const Monotonicity> row);

  std::size_t order() const noexcept { return take_second_.size(); }
  bool takes_second(std::size_t j) const { return take_second_.at(j); }

  ProductPoint operator()(const ProductPoint& x, const ProductPoint& y) const;

  /// x precedes y in the order induced by the row: x_j <= y_j on Increasing
  /// coordinates and x_j >= y_j on Decreasing ones.
  bool precedes(const ProductPoint& x, const ProductPoint& y) const;

 private:
  std::vector<bool> take_second_;
};

/// sigma_i(x, y) for the system's signature row i (0-based).
ProductPoint sigma_apply(const PartiallyMonotoneSystem& system, std::size_t i,
                         const ProductPoint& x, const ProductPoint& y);

/// x precedes_i y, evaluated coordinate by coordinate.
bool preceq_i(const PartiallyMonotoneSystem& system, std::size_t i,
              const ProductPoint& x, const ProductPoint& y);

/// The same relation through its definition sigma_i(x,y) <= sigma_i(y,x).
bool preceq_i_via_selector(const PartiallyMonotoneSystem& system,
                           std::size_t i, const ProductPoint& x,
                           const ProductPoint& y);

/// A map from pairs of points with profile `domain` to points with profile
/// `codomain`. Evaluation checks both profiles.
struct BivariateMap {
  DimensionProfile domain;
  DimensionProfile codomain;
  std::function<ProductPoint(const ProductPoint&, const ProductPoint&)> fn;

  ProductPoint operator()(const ProductPoint& x, const ProductPoint& y) const;
};

/// P(x, y) = x on the given profile.
BivariateMap projection(const DimensionProfile& profile);

/// (outer * inner)(x, y) = outer(inner(x, y), inner(y, x)).
BivariateMap s_compose(BivariateMap outer, BivariateMap inner);

/// n-fold symmetric composition of a self-map; power 0 is the projection.
BivariateMap s_power(BivariateMap map, std::size_t n);

/// The mixed monotone operator A : X^2 -> X built from a system.
class MixedMonotoneOperator {
 public:
  explicit MixedMonotoneOperator(PartiallyMonotoneSystem system);

  const PartiallyMonotoneSystem& system() const noexcept { return *system_; }
  const Selector& selector(std::size_t i) const { return selectors_.at(i); }
  std::size_t order() const noexcept { return selectors_.size(); }

  /// A_i(x, y) = T_i(sigma_i(x, y)).
  Vector component(std::size_t i, const ProductPoint& x,
                   const ProductPoint& y) const;
  ProductPoint operator()(const ProductPoint& x, const ProductPoint& y) const;

  /// A as a bivariate self-map of X.
  BivariateMap as_map() const;
  /// A_i as a bivariate map into the single-component space X_i.
  BivariateMap component_map(std::size_t i) const;
  /// sigma_i as a bivariate self-map of X.
  BivariateMap selector_map(std::size_t i) const;

 private:
  std::shared_ptr<const PartiallyMonotoneSystem> system_;
  std::vector<Selector> selectors_;
};

MixedMonotoneOperator build_mixed_operator(const PartiallyMonotoneSystem& system);

}  // namespace mfix
