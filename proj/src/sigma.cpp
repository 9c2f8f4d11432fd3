#include "mfix/sigma.hpp"

#include <string>
#include <utility>

namespace mfix {

Selector::Selector(std::span<const Monotonicity> row) {
  take_second_.reserve(row.size());
  for (auto m : row) take_second_.push_back(m == Monotonicity::Decreasing);
}

ProductPoint Selector::operator()(const ProductPoint& x,
                                  const ProductPoint& y) const {
  require_same_profile(x, y);
  if (x.size() != order()) {
    throw StructuralError("selector of order " + std::to_string(order()) +
                          " applied to a point with " +
                          std::to_string(x.size()) + " components");
  }
  std::vector<Vector> comps;
  comps.reserve(order());
  for (std::size_t j = 0; j < order(); ++j) {
    comps.push_back(take_second_[j] ? y[j] : x[j]);
  }
  return ProductPoint(std::move(comps));
}

bool Selector::precedes(const ProductPoint& x, const ProductPoint& y) const {
  require_same_profile(x, y);
  if (x.size() != order()) {
    throw StructuralError("order relation applied to a point of wrong order");
  }
  for (std::size_t j = 0; j < order(); ++j) {
    const bool ok = take_second_[j] ? vector_leq(y[j], x[j])
                                    : vector_leq(x[j], y[j]);
    if (!ok) return false;
  }
  return true;
}

namespace {

Selector selector_for(const PartiallyMonotoneSystem& system, std::size_t i) {
  if (i >= system.order()) {
    throw StructuralError("selector index " + std::to_string(i) +
                          " out of range for a system of order " +
                          std::to_string(system.order()));
  }
  return Selector(system.signature().row(i));
}

}  // namespace

ProductPoint sigma_apply(const PartiallyMonotoneSystem& system, std::size_t i,
                         const ProductPoint& x, const ProductPoint& y) {
  system.check_point(x);
  system.check_point(y);
  return selector_for(system, i)(x, y);
}

bool preceq_i(const PartiallyMonotoneSystem& system, std::size_t i,
              const ProductPoint& x, const ProductPoint& y) {
  system.check_point(x);
  system.check_point(y);
  return selector_for(system, i).precedes(x, y);
}

bool preceq_i_via_selector(const PartiallyMonotoneSystem& system,
                           std::size_t i, const ProductPoint& x,
                           const ProductPoint& y) {
  const Selector s = selector_for(system, i);
  return product_leq(s(x, y), s(y, x));
}

// ---------------------------------------------------------------------------
// Bivariate maps

ProductPoint BivariateMap::operator()(const ProductPoint& x,
                                      const ProductPoint& y) const {
  if (x.profile() != domain || y.profile() != domain) {
    throw StructuralError("bivariate map evaluated outside its domain profile");
  }
  ProductPoint out = fn(x, y);
  if (out.profile() != codomain) {
    throw StructuralError("bivariate map produced a point outside its "
                          "codomain profile");
  }
  return out;
}

BivariateMap projection(const DimensionProfile& profile) {
  return BivariateMap{profile, profile,
                      [](const ProductPoint& x, const ProductPoint&) {
                        return x;
                      }};
}

BivariateMap s_compose(BivariateMap outer, BivariateMap inner) {
  if (outer.domain != inner.codomain) {
    throw StructuralError(
        "s-composition: codomain of the inner map does not match the domain "
        "of the outer map");
  }
  DimensionProfile domain = inner.domain;
  DimensionProfile codomain = outer.codomain;
  return BivariateMap{
      std::move(domain), std::move(codomain),
      [outer = std::move(outer), inner = std::move(inner)](
          const ProductPoint& x, const ProductPoint& y) {
        return outer(inner(x, y), inner(y, x));
      }};
}

BivariateMap s_power(BivariateMap map, std::size_t n) {
  if (map.domain != map.codomain) {
    throw StructuralError("s-power needs a bivariate self-map");
  }
  if (n == 0) return projection(map.domain);
  if (n == 1) return map;
  DimensionProfile profile = map.domain;
  // A^{k+1}(x,y) = A(A^k(x,y), A^k(y,x)): carry both orderings together so
  // each power costs two evaluations of A.
  return BivariateMap{
      profile, profile,
      [map = std::move(map), n](const ProductPoint& x, const ProductPoint& y) {
        ProductPoint p = x;
        ProductPoint q = y;
        for (std::size_t k = 0; k < n; ++k) {
          ProductPoint next_p = map(p, q);
          ProductPoint next_q = map(q, p);
          p = std::move(next_p);
          q = std::move(next_q);
        }
        return p;
      }};
}

// ---------------------------------------------------------------------------
// MixedMonotoneOperator

MixedMonotoneOperator::MixedMonotoneOperator(PartiallyMonotoneSystem system)
    : system_(std::make_shared<const PartiallyMonotoneSystem>(
          std::move(system))) {
  selectors_.reserve(system_->order());
  for (std::size_t i = 0; i < system_->order(); ++i) {
    selectors_.emplace_back(system_->signature().row(i));
  }
}

Vector MixedMonotoneOperator::component(std::size_t i, const ProductPoint& x,
                                        const ProductPoint& y) const {
  if (i >= selectors_.size()) {
    throw StructuralError("component index " + std::to_string(i) +
                          " out of range");
  }
  system_->check_point(x);
  system_->check_point(y);
  return system_->evaluate(i, selectors_[i](x, y));
}

ProductPoint MixedMonotoneOperator::operator()(const ProductPoint& x,
                                               const ProductPoint& y) const {
  std::vector<Vector> comps;
  comps.reserve(order());
  for (std::size_t i = 0; i < order(); ++i) {
    comps.push_back(component(i, x, y));
  }
  return ProductPoint(std::move(comps));
}

BivariateMap MixedMonotoneOperator::as_map() const {
  return BivariateMap{system_->profile(), system_->profile(),
                      [self = *this](const ProductPoint& x,
                                     const ProductPoint& y) {
                        return self(x, y);
                      }};
}

BivariateMap MixedMonotoneOperator::component_map(std::size_t i) const {
  if (i >= selectors_.size()) {
    throw StructuralError("component index out of range");
  }
  return BivariateMap{system_->profile(),
                      DimensionProfile{system_->profile()[i]},
                      [self = *this, i](const ProductPoint& x,
                                        const ProductPoint& y) {
                        return ProductPoint({self.component(i, x, y)});
                      }};
}

BivariateMap MixedMonotoneOperator::selector_map(std::size_t i) const {
  const Selector s = selectors_.at(i);
  return BivariateMap{system_->profile(), system_->profile(),
                      [s](const ProductPoint& x, const ProductPoint& y) {
                        return s(x, y);
                      }};
}

MixedMonotoneOperator build_mixed_operator(
    const PartiallyMonotoneSystem& system) {
  return MixedMonotoneOperator(system);
}

}  // namespace mfix
