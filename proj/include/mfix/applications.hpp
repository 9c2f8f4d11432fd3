#pragma once

// Two problem families expressed as partially monotone systems:
//
//  * the modified tripled problem x = F(x,y,z), y = F(y,x,z), z = F(z,y,x)
//    with F nondecreasing in its first and third arguments and nonincreasing
//    in the second;
//  * the periodic boundary-value system
//      x' = f(t,x,y,z), y' = f(t,y,x,z), z' = f(t,z,y,x),  x(0) = x(T), ...
//    rewritten through the periodic Green's function
//      G(t,s) = e^{lambda(T+s-t)} / (e^{lambda T} - 1)   for s < t,
//               e^{lambda(s-t)}   / (e^{lambda T} - 1)   for s > t,
//    as the tripled problem F(x,y,z)(t) = int_0^T G(t,s)(f(s,x,y,z)+lambda x) ds.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mfix/core.hpp"
#include "mfix/solver.hpp"
#include "mfix/verify.hpp"

namespace mfix {

using TripledMap =
    std::function<Vector(const Vector&, const Vector&, const Vector&)>;

struct TripledProblem {
  TripledMap F;
  /// Length of x, y and z.
  std::size_t dimension = 1;
  MetricKind metric = MetricKind::Supremum;
  ComparisonFunction phi = ComparisonFunction::linear(0.5);
};

/// Rows (+-+), (-++), (+-+): T_1 = F(x,y,z), T_2 = F(y,x,z), T_3 = F(z,y,x).
MonotoneSignature tripled_signature();

PartiallyMonotoneSystem tripled_to_system(const TripledProblem& problem);

/// (x,y,z) and (u,v,w) with x <= u, y >= v, z <= w.
struct TripledSample {
  Vector x, y, z, u, v, w;
};

/// Draws sextuples in the per-argument box [lower, upper]^dimension.
std::vector<TripledSample> sample_tripled_pairs(const TripledProblem& problem,
                                                double lower, double upper,
                                                std::size_t count,
                                                std::uint64_t seed);

/// d(F(x,y,z), F(u,v,w)) <= phi(max{d(x,u), d(y,v), d(z,w)}) per sample.
std::vector<ContractionCheck> check_tripled_contraction(
    const TripledProblem& problem, std::span<const TripledSample> samples,
    double slack = kDefaultSamplingSlack);

/// The same samples rewritten as ordered pairs for T_1, T_2 and T_3 of
/// tripled_to_system(problem), in sample order.
std::array<std::vector<SamplePair>, 3> transfer_tripled_samples(
    std::span<const TripledSample> samples);

/// The coupled-bounds inequalities written directly in terms of F for the
/// lower start (x,y,z) and upper start (u,v,w):
///   x <= F(x,v,z),  y <= F(y,u,z),  z <= F(z,v,x),
///   u >= F(u,y,w),  v >= F(v,x,w),  w >= F(w,y,u).
/// Returns the index (0..5) of the first failing inequality, if any.
std::optional<std::size_t> tripled_bounds_failure(const TripledProblem& problem,
                                                  const TripledSample& bounds,
                                                  double slack = 0.0);

// ---------------------------------------------------------------------------
// Periodic boundary-value system

/// Right-hand side f(t, x, y, z).
using RightHandSide = std::function<double(double, double, double, double)>;

struct PbvsProblem {
  double period = 1.0;
  double lambda = 1.0;
  RightHandSide f;
  ComparisonFunction phi = ComparisonFunction::linear(0.5);
  /// Uniform grid on [0, period], both endpoints included.
  std::size_t grid_size = 129;

  /// Throws ConfigError on period <= 0, lambda <= 0, grid_size < 3 or a
  /// missing right-hand side.
  void validate() const;
  Vector grid() const;
  double step() const;
};

/// Periodic Green's function; the diagonal s == t takes the s < t branch.
/// Throws ConfigError for lambda == 0.
double green_kernel(double lambda, double period, double t, double s);

/// Composite trapezoid approximation of int_0^T G(t_k, s) ds at every grid
/// node, with the integral split at s = t_k and one-sided kernel limits used
/// on either side of the jump.
Vector trapezoid_kernel_row_sums(double lambda, double period,
                                 std::size_t grid_size);

/// Quadrature weights W with (W h)_k ~ int_0^T G(t_k, s) h(s) ds for grid
/// functions h: the kernel is integrated exactly against the piecewise linear
/// interpolant of h on each grid cell (product trapezoid rule). Rows sum to
/// 1/lambda up to roundoff; the first and last rows coincide.
class GreenQuadrature {
 public:
  GreenQuadrature(double lambda, double period, std::size_t grid_size);

  std::size_t size() const noexcept { return size_; }
  double weight(std::size_t row, std::size_t col) const {
    return weights_[row * size_ + col];
  }
  Vector apply(std::span<const double> h) const;
  Vector row_sums() const;

 private:
  std::size_t size_;
  std::vector<double> weights_;
};

/// F(x,y,z)(t_k) = sum_l W_kl (f(s_l, x_l, y_l, z_l) + lambda x_l) on grid
/// functions of length grid_size, with the supremum metric.
TripledProblem pbvs_operator(const PbvsProblem& problem);

/// Six grid functions: lower start (x,y,z) and upper start (u,v,w).
struct CoupledLowerUpperSolution {
  Vector x, y, z, u, v, w;
};

struct LowerUpperViolation {
  std::size_t inequality;  // 0..5 in the order of tripled_bounds_failure
  std::size_t node;
  double value;
  double image;
};

struct LowerUpperReport {
  bool holds = false;
  std::optional<LowerUpperViolation> first_violation;
};

inline constexpr double kDefaultLowerUpperSlack = 1e-10;

/// Integral form of the coupled lower/upper inequalities at every node.
LowerUpperReport verify_lower_upper(const PbvsProblem& problem,
                                    const CoupledLowerUpperSolution& candidate,
                                    double slack = kDefaultLowerUpperSlack);

struct PbvsSolution {
  Vector t;
  Vector x, y, z;
  FixedPointResult result;
  /// max over nodes and equations of |x' - f(t,x,y,z)| with x' from periodic
  /// central differences.
  double defect = 0.0;
};

/// Finite-difference defect of a grid triple (diagnostic only).
double pbvs_defect(const PbvsProblem& problem, std::span<const double> x,
                   std::span<const double> y, std::span<const double> z);

/// Solves the discretized system. When bounds are given they must pass
/// verify_lower_upper (ValidationError otherwise) and seed the coupled
/// iteration; otherwise both starts are zero.
PbvsSolution solve_pbvs(const PbvsProblem& problem,
                        const std::optional<CoupledLowerUpperSolution>& bounds,
                        const SolveConfig& config);

}  // namespace mfix
