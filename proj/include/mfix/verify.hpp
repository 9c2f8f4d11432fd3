#pragma once

// Sampled certification of the structural and contraction hypotheses, the
// coupled-bounds check, and the classifier for signatures that become
// all-nondecreasing after reversing some component orders.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfix/core.hpp"
#include "mfix/sigma.hpp"

namespace mfix {

/// Axis-aligned sampling region, one box per component.
struct SamplingBox {
  ProductPoint lower;
  ProductPoint upper;

  static SamplingBox uniform(const DimensionProfile& profile, double lo,
                             double hi);

  /// Throws ConfigError when some width is not positive and finite.
  void validate() const;
  DimensionProfile profile() const { return lower.profile(); }
};

/// Relative roundoff allowance used by the sampled inequality checks: an
/// inequality a <= b is accepted when a <= b + slack * (1 + |a| + |b|) with
/// the magnitudes of the operator values involved.
inline constexpr double kDefaultSamplingSlack = 1e-13;

struct ContractionViolation {
  std::size_t component;
  std::size_t sample;
  ProductPoint x;
  ProductPoint y;
  double lhs;
  double rhs;
};

/// Result of the sampled check
///   d_i(T_i x, T_i y) <= phi(max_j d_j(x_j, y_j))   for x precedes_i y.
struct ContractionReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string phi;
  double slack = kDefaultSamplingSlack;
  std::vector<ContractionViolation> violations;
  /// max of d_i(T_i x, T_i y) / max_j d_j(x_j, y_j) over all samples.
  double max_ratio = 0.0;
  bool certified = false;

  /// Monte-Carlo evidence only; a passing report is not a proof.
  static constexpr const char* kSoundnessNote =
      "sampled certification: a pass is evidence, not proof";
};

/// Draws `sample_count` samples; each sample holds, for every i, a pair x, y in
/// the box with x precedes_i y: every coordinate of y is x moved in the
/// direction given by row i by a magnitude log-uniform in [1e-6, box width].
/// Deterministic in `seed`.
ContractionReport verify_contraction(const PartiallyMonotoneSystem& system,
                                     const ComparisonFunction& phi,
                                     const SamplingBox& box,
                                     std::size_t sample_count,
                                     std::uint64_t seed,
                                     double slack = kDefaultSamplingSlack);

struct SamplePair {
  ProductPoint x;
  ProductPoint y;
};

struct ContractionCheck {
  double lhs;
  double rhs;
  bool holds;

  friend bool operator==(const ContractionCheck&,
                         const ContractionCheck&) = default;
};

/// The contraction inequality for component i on explicit pairs (each pair
/// must satisfy x precedes_i y; throws ValidationError otherwise).
std::vector<ContractionCheck> check_component_contraction(
    const PartiallyMonotoneSystem& system, const ComparisonFunction& phi,
    std::size_t i, std::span<const SamplePair> pairs,
    double slack = kDefaultSamplingSlack);

struct MonotonicityViolation {
  std::size_t component;  // operator index i
  std::size_t variable;   // perturbed variable j
  std::size_t sample;
};

struct MonotonicityReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<MonotonicityViolation> violations;
  bool consistent() const noexcept { return violations.empty(); }
};

/// Sampled check of the declared signature: perturbing only x_j upwards must
/// move T_i up (Increasing) or down (Decreasing) entrywise.
MonotonicityReport check_declared_monotonicity(
    const PartiallyMonotoneSystem& system, const SamplingBox& box,
    std::size_t sample_count, std::uint64_t seed,
    double slack = kDefaultSamplingSlack);

/// build_mixed_operator preceded by the sampled signature check; throws
/// ValidationError naming the first inconsistent (i, j).
MixedMonotoneOperator build_validated_operator(
    const PartiallyMonotoneSystem& system, const SamplingBox& box,
    std::size_t sample_count, std::uint64_t seed);

struct BoundsFailure {
  std::size_t component;
  std::size_t entry;
  /// true: x0_i <= A_i(x0, y0) failed; false: y0_i >= A_i(y0, x0) failed.
  bool lower_family;
  double bound;
  double image;
};

struct CoupledBoundsReport {
  bool holds = false;
  std::optional<BoundsFailure> first_failure;
};

/// x0_i <= T_i sigma_i(x0, y0) and y0_i >= T_i sigma_i(y0, x0) for all i,
/// compared exactly.
CoupledBoundsReport verify_coupled_bounds(const PartiallyMonotoneSystem& system,
                                          const ProductPoint& x0,
                                          const ProductPoint& y0);

struct ReducibilityVerdict {
  bool reducible = false;
  /// epsilon_i in {+1, -1} with S_ij = epsilon_i * epsilon_j.
  std::optional<std::vector<int>> witness;
};

ReducibilityVerdict classify_reducibility(const MonotoneSignature& signature);

struct ReducibleCount {
  std::uint64_t total;
  std::uint64_t reducible;
};

/// Exhaustive count over all 2^(n^2) signatures of order n, 2 <= n <= 5.
ReducibleCount count_reducible(std::size_t n);

/// Signature of order n from a bitmask: bit (i*n + j) set means entry (i, j)
/// is Decreasing.
MonotoneSignature signature_from_mask(std::size_t n, std::uint64_t mask);

}  // namespace mfix
