#pragma once

// Coupled fixed-point iteration
//   u^{n+1}_i = T_i sigma_i(u^n, v^n),   v^{n+1}_i = T_i sigma_i(v^n, u^n)
// with a stopping rule on the step residual and the u-v gap.

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "mfix/core.hpp"
#include "mfix/sigma.hpp"

namespace mfix {

struct SolveConfig {
  double tolerance = 1e-10;
  std::size_t max_iterations = 1000;
  ComparisonFunction phi = ComparisonFunction::linear(0.5);
  bool track_bracket = true;
  /// Abort when the residual grows by more than `divergence_factor` over
  /// `divergence_window` steps.
  std::size_t divergence_window = 50;
  double divergence_factor = 1e6;

  /// Throws ConfigError on a non-positive tolerance or zero iteration budget.
  void validate() const;
};

struct CoupledIterationState {
  ProductPoint u;
  ProductPoint v;
  std::size_t iteration = 0;
  /// max(d(u^n, u^{n-1}), d(v^n, v^{n-1})); zero for the initial state.
  double residual = 0.0;
  /// d(u^n, v^n).
  double gap = 0.0;
  /// u^k <= v^k held for every k <= n.
  bool bracket_valid = false;
};

/// One line of the iteration trace.
struct IterationRecord {
  std::size_t iteration;
  double residual;
  double gap;
  bool bracket_valid;

  friend bool operator==(const IterationRecord&,
                         const IterationRecord&) = default;
};

enum class SolveStatus { Converged, MaxIterations, Diverged, DefectCheckFailed };

std::string_view to_string(SolveStatus status);

struct FixedPointResult {
  ProductPoint solution;
  std::size_t iterations = 0;
  double residual = 0.0;
  double gap = 0.0;
  /// d(T(x*), x*), evaluated a posteriori.
  double defect = 0.0;
  SolveStatus status = SolveStatus::MaxIterations;
  bool bracket_valid = false;
  std::vector<IterationRecord> history;

  bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Observer called with the initial state and after every step.
using IterationObserver = std::function<void(const CoupledIterationState&)>;

CoupledIterationState initial_state(const MixedMonotoneOperator& op,
                                    ProductPoint start_u,
                                    ProductPoint start_v);

/// u' = A(u, v), v' = A(v, u); updates residual, gap and bracket status.
CoupledIterationState coupled_step(const MixedMonotoneOperator& op,
                                   const CoupledIterationState& state);

/// Iterates until the step residual and the gap are both within tolerance.
/// The returned solution is u^n for the first n with
/// max(d(u^{n+1},u^n), d(v^{n+1},v^n)) <= tol and d(u^n, v^n) <= tol.
FixedPointResult solve(const MixedMonotoneOperator& op,
                       const ProductPoint& start_u,
                       const ProductPoint& start_v, const SolveConfig& config,
                       const IterationObserver& observer = {});

FixedPointResult solve(const PartiallyMonotoneSystem& system,
                       const ProductPoint& start_u,
                       const ProductPoint& start_v, const SolveConfig& config,
                       const IterationObserver& observer = {});

/// solve(system, start, start, config): the iterates are the Picard iterates
/// of T.
FixedPointResult solve_from_single_start(const PartiallyMonotoneSystem& system,
                                         const ProductPoint& start,
                                         const SolveConfig& config,
                                         const IterationObserver& observer = {});

/// A-priori step count for a Linear(alpha) contraction:
/// ceil(ln(tol / d0) / ln(alpha)), or nullopt for other comparison functions.
std::optional<std::size_t> a_priori_iterations(const ComparisonFunction& phi,
                                               double initial_distance,
                                               double tolerance);

}  // namespace mfix
