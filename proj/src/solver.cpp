#include "mfix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace mfix {

void SolveConfig::validate() const {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw ConfigError("tolerance must be a positive finite number, got " +
                      std::to_string(tolerance));
  }
  if (max_iterations < 1) {
    throw ConfigError("max_iterations must be at least 1");
  }
  if (divergence_window < 1 || !(divergence_factor > 1.0)) {
    throw ConfigError("divergence window must be >= 1 and factor > 1");
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max_iterations";
    case SolveStatus::Diverged:
      return "diverged";
    case SolveStatus::DefectCheckFailed:
      return "defect_check_failed";
  }
  return "unknown";
}

CoupledIterationState initial_state(const MixedMonotoneOperator& op,
                                    ProductPoint start_u,
                                    ProductPoint start_v) {
  const auto& system = op.system();
  system.check_point(start_u);
  system.check_point(start_v);
  CoupledIterationState state;
  state.gap = system.distance(start_u, start_v);
  state.bracket_valid = product_leq(start_u, start_v);
  state.u = std::move(start_u);
  state.v = std::move(start_v);
  return state;
}

CoupledIterationState coupled_step(const MixedMonotoneOperator& op,
                                   const CoupledIterationState& state) {
  const auto& system = op.system();
  CoupledIterationState next;
  next.u = op(state.u, state.v);
  next.v = op(state.v, state.u);
  next.iteration = state.iteration + 1;
  next.residual = std::max(system.distance(next.u, state.u),
                           system.distance(next.v, state.v));
  next.gap = system.distance(next.u, next.v);
  next.bracket_valid = state.bracket_valid && product_leq(next.u, next.v);
  return next;
}

FixedPointResult solve(const MixedMonotoneOperator& op,
                       const ProductPoint& start_u,
                       const ProductPoint& start_v, const SolveConfig& config,
                       const IterationObserver& observer) {
  config.validate();
  const auto& system = op.system();

  CoupledIterationState state = initial_state(op, start_u, start_v);
  if (!config.track_bracket) state.bracket_valid = false;
  if (observer) observer(state);

  FixedPointResult result;
  result.status = SolveStatus::MaxIterations;

  // The step from n to n+1 certifies u^n; the budget counts certified iterates.
  while (true) {
    CoupledIterationState next = coupled_step(op, state);
    if (!config.track_bracket) next.bracket_valid = false;
    result.history.push_back(
        {next.iteration, next.residual, next.gap, next.bracket_valid});
    if (observer) observer(next);

    if (next.residual <= config.tolerance && state.gap <= config.tolerance) {
      result.status = SolveStatus::Converged;
      break;
    }
    const std::size_t steps = result.history.size();
    if (steps > config.divergence_window) {
      const double earlier =
          result.history[steps - 1 - config.divergence_window].residual;
      if (earlier > 0.0 && next.residual > config.divergence_factor * earlier) {
        state = std::move(next);
        result.status = SolveStatus::Diverged;
        break;
      }
    }
    state = std::move(next);
    if (state.iteration >= config.max_iterations) break;
  }

  result.iterations = state.iteration;
  result.gap = state.gap;
  result.residual = result.history.back().residual;
  result.bracket_valid = state.bracket_valid;
  result.defect = system.distance(system.apply(state.u), state.u);
  if (result.status == SolveStatus::Converged &&
      result.defect > 2.0 * config.tolerance) {
    result.status = SolveStatus::DefectCheckFailed;
  }
  result.solution = std::move(state.u);
  return result;
}

FixedPointResult solve(const PartiallyMonotoneSystem& system,
                       const ProductPoint& start_u,
                       const ProductPoint& start_v, const SolveConfig& config,
                       const IterationObserver& observer) {
  return solve(build_mixed_operator(system), start_u, start_v, config,
               observer);
}

FixedPointResult solve_from_single_start(const PartiallyMonotoneSystem& system,
                                         const ProductPoint& start,
                                         const SolveConfig& config,
                                         const IterationObserver& observer) {
  return solve(system, start, start, config, observer);
}

std::optional<std::size_t> a_priori_iterations(const ComparisonFunction& phi,
                                               double initial_distance,
                                               double tolerance) {
  if (phi.kind() != ComparisonFunction::Kind::Linear) return std::nullopt;
  if (initial_distance <= tolerance) return 0;
  if (phi.alpha() == 0.0) return 1;
  const double n =
      std::ceil(std::log(tolerance / initial_distance) / std::log(phi.alpha()));
  return static_cast<std::size_t>(std::max(0.0, n));
}

}  // namespace mfix
