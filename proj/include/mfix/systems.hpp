#pragma once

// Declarative system builders (affine and polynomial tables) and the
// compiled-in registry of named operators and PBVS right-hand sides.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfix/applications.hpp"
#include "mfix/core.hpp"

namespace mfix {

using Matrix = std::vector<Vector>;  // row-major, one Vector per row

/// T(x) = M x + c on the flattened point. M is D x D with D the total
/// dimension of `profile`.
PartiallyMonotoneSystem affine_system(MonotoneSignature signature,
                                      const Matrix& matrix,
                                      const Vector& offset,
                                      const DimensionProfile& profile,
                                      MetricProfile metric = {});

/// Signature read off the block signs of M: block (i, j) is Increasing when
/// all its entries are >= 0 and Decreasing when all are <= 0 (zero blocks are
/// Increasing). Throws ValidationError for a block with mixed signs.
MonotoneSignature affine_signature(const Matrix& matrix,
                                   const DimensionProfile& profile);

/// c * x_{i1}^{p1} * x_{i2}^{p2} * ... over flattened variable indices.
struct Monomial {
  double coefficient = 0.0;
  std::vector<std::pair<std::size_t, unsigned>> powers;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

using Polynomial = std::vector<Monomial>;

/// Parses "0.5 + 0.2*x0 - 0.1*x1^3*x2". Throws ConfigError on bad syntax.
Polynomial parse_polynomial(std::string_view text);
/// Canonical text form; parse_polynomial(format_polynomial(p)) == p.
std::string format_polynomial(const Polynomial& p);
double evaluate_polynomial(const Polynomial& p, std::span<const double> flat);

/// One polynomial per flattened output entry.
PartiallyMonotoneSystem polynomial_system(MonotoneSignature signature,
                                          std::vector<Polynomial> polys,
                                          const DimensionProfile& profile,
                                          MetricProfile metric = {});

struct RegisteredSystem {
  std::string name;
  std::string description;
  MonotoneSignature signature;
  DimensionProfile profile;
  ComparisonFunction phi;
  std::function<PartiallyMonotoneSystem()> build;
};

const std::vector<RegisteredSystem>& system_registry();
/// Throws ConfigError for an unknown name.
const RegisteredSystem& find_system(std::string_view name);

using ParameterMap = std::map<std::string, double>;

struct RegisteredRhs {
  std::string name;
  std::string description;
  ParameterMap defaults;
  double period;
  ComparisonFunction phi;
  /// Builds f for the given parameters, lambda and period.
  std::function<RightHandSide(const ParameterMap&, double lambda,
                              double period)>
      make;
};

const std::vector<RegisteredRhs>& rhs_registry();
const RegisteredRhs& find_rhs(std::string_view name);

}  // namespace mfix
