#pragma once

// Independent reference computations and random instance generators used by
// the unit, property and acceptance tests. Nothing here calls the solver.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "mfix/applications.hpp"
#include "mfix/core.hpp"
#include "mfix/systems.hpp"

namespace oracle {

using Rng = std::mt19937_64;
using mfix::DimensionProfile;
using mfix::Matrix;
using mfix::MonotoneSignature;
using mfix::ProductPoint;
using mfix::Vector;

double uniform(Rng& rng, double lo, double hi);
std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);

MonotoneSignature random_signature(Rng& rng, std::size_t n);
DimensionProfile random_profile(Rng& rng, std::size_t n, std::size_t max_m = 3);
ProductPoint random_point(Rng& rng, const DimensionProfile& profile,
                          double lo = -5.0, double hi = 5.0);
/// Entries drawn from {-1, 0, 1} so that ties and comparable pairs are common.
ProductPoint coarse_point(Rng& rng, const DimensionProfile& profile);
/// x + (nonnegative entries), with some entries left unchanged.
ProductPoint shifted_up(Rng& rng, const ProductPoint& x);
ProductPoint shifted_down(Rng& rng, const ProductPoint& x);

/// Nonlinear system whose declared signature holds by construction:
/// T_i(x)_k = c_ik + sum_j s_ij sum_l a_ijkl g_j(x_jl), a >= 0, g_j increasing.
/// A positive `row_budget` rescales each row of weights to sum to at most that
/// value, which makes T a contraction of that modulus in the sup metric.
mfix::PartiallyMonotoneSystem random_monotone_system(
    Rng& rng, const MonotoneSignature& signature,
    const DimensionProfile& profile, double row_budget = 0.0);

struct AffineInstance {
  Matrix M;
  Vector c;
  MonotoneSignature signature;
  DimensionProfile profile;
};

/// Block signs follow a random signature; every row of |M| sums to at most
/// `row_sum`.
AffineInstance random_affine(Rng& rng, std::size_t n, double row_sum);

/// (I - M)^{-1} c by a dense LU solve.
Vector affine_fixed_point(const Matrix& M, const Vector& c);

/// Largest row sum of |M|.
double abs_row_sum(const Matrix& M);

/// x, T(x), T^2(x), ..., T^steps(x).
std::vector<Vector> picard_trajectory(
    const std::function<Vector(const Vector&)>& T, Vector x0,
    std::size_t steps);

/// Damped Newton on R(x,y,z) = (x - F(x,y,z), y - F(y,x,z), z - F(z,y,x)).
std::optional<std::array<Vector, 3>> tripled_newton(const mfix::TripledMap& F,
                                                    std::size_t m,
                                                    double tol = 1e-13);

/// Every epsilon in {+1,-1}^n tried against S_ij = eps_i eps_j.
std::optional<std::vector<int>> brute_force_witness(
    const MonotoneSignature& signature);

/// Periodic solution of x' = f(t,x,y,z), y' = f(t,y,x,z), z' = f(t,z,y,x) by
/// shooting: RK4 with `substeps` steps per grid cell and Newton on the
/// period map. Returns x, y, z at the grid nodes.
std::optional<std::array<Vector, 3>> periodic_shooting(
    const mfix::RightHandSide& f, double period, std::size_t grid_size,
    std::size_t substeps);

/// Random mixed-monotone F on R^m: nondecreasing in x and z, nonincreasing
/// in y, Lipschitz with the returned constant in the sup metric.
struct TripledInstance {
  mfix::TripledMap F;
  std::size_t m;
  double lipschitz;
};
TripledInstance random_tripled(Rng& rng, std::size_t m, double lipschitz);

}  // namespace oracle
