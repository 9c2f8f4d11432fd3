#include "mfix/applications.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <utility>

namespace mfix {

// ---------------------------------------------------------------------------
// Tripled problem

MonotoneSignature tripled_signature() {
  return MonotoneSignature::parse("+-+/-++/+-+");
}

PartiallyMonotoneSystem tripled_to_system(const TripledProblem& problem) {
  if (!problem.F) throw ConfigError("tripled problem has no map F");
  if (problem.dimension == 0) throw ConfigError("tripled dimension is zero");
  const TripledMap F = problem.F;
  std::vector<ComponentMap> ops = {
      [F](const ProductPoint& p) { return F(p[0], p[1], p[2]); },
      [F](const ProductPoint& p) { return F(p[1], p[0], p[2]); },
      [F](const ProductPoint& p) { return F(p[2], p[1], p[0]); },
  };
  const std::size_t m = problem.dimension;
  return PartiallyMonotoneSystem(tripled_signature(), std::move(ops),
                                 DimensionProfile{m, m, m},
                                 MetricProfile::uniform(3, problem.metric));
}

std::vector<TripledSample> sample_tripled_pairs(const TripledProblem& problem,
                                                double lower, double upper,
                                                std::size_t count,
                                                std::uint64_t seed) {
  if (!(upper > lower)) throw ConfigError("degenerate tripled sampling box");
  const std::size_t m = problem.dimension;
  // x <= u, y >= v, z <= w: the pairs ordered for T_1 = F.
  std::vector<TripledSample> out;
  out.reserve(count);
  std::mt19937_64 engine(seed);
  // 53 random bits scaled to [0, 1); unlike std distributions this is the
  // same sequence on every standard library.
  auto unit = [](std::mt19937_64& e) {
    return static_cast<double>(e() >> 11) * 0x1.0p-53;
  };
  const double width = upper - lower;
  for (std::size_t s = 0; s < count; ++s) {
    TripledSample t;
    auto draw = [&](Vector& v) {
      v.resize(m);
      for (auto& e : v) e = lower + width * unit(engine);
    };
    draw(t.x);
    draw(t.y);
    draw(t.z);
    const bool common = s % 2 == 0;
    const double base =
        std::exp(std::log(1e-6) + (std::log(width) - std::log(1e-6)) *
                                      unit(engine));
    auto delta = [&]() {
      return common ? base
                    : std::exp(std::log(1e-6) +
                               (std::log(width) - std::log(1e-6)) *
                                   unit(engine));
    };
    t.u = t.x;
    t.v = t.y;
    t.w = t.z;
    for (std::size_t k = 0; k < m; ++k) {
      t.u[k] += delta();
      t.v[k] -= delta();
      t.w[k] += delta();
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<ContractionCheck> check_tripled_contraction(
    const TripledProblem& problem, std::span<const TripledSample> samples,
    double slack) {
  std::vector<ContractionCheck> out;
  out.reserve(samples.size());
  auto sup = [](const Vector& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
  };
  for (const auto& s : samples) {
    const Vector a = problem.F(s.x, s.y, s.z);
    const Vector b = problem.F(s.u, s.v, s.w);
    const double lhs = component_distance(problem.metric, a, b);
    const double spread =
        std::max({component_distance(problem.metric, s.x, s.u),
                  component_distance(problem.metric, s.y, s.v),
                  component_distance(problem.metric, s.z, s.w)});
    const double rhs = problem.phi(spread);
    const double scale = 1.0 + sup(a) + sup(b) +
                         std::max({sup(s.x), sup(s.y), sup(s.z)}) +
                         std::max({sup(s.u), sup(s.v), sup(s.w)});
    out.push_back({lhs, rhs, lhs <= rhs + slack * scale});
  }
  return out;
}

std::array<std::vector<SamplePair>, 3> transfer_tripled_samples(
    std::span<const TripledSample> samples) {
  std::array<std::vector<SamplePair>, 3> out;
  for (const auto& s : samples) {
    out[0].push_back({ProductPoint({s.x, s.y, s.z}),
                      ProductPoint({s.u, s.v, s.w})});
    out[1].push_back({ProductPoint({s.y, s.x, s.z}),
                      ProductPoint({s.v, s.u, s.w})});
    out[2].push_back({ProductPoint({s.z, s.y, s.x}),
                      ProductPoint({s.w, s.v, s.u})});
  }
  return out;
}

std::optional<std::size_t> tripled_bounds_failure(const TripledProblem& problem,
                                                  const TripledSample& b,
                                                  double slack) {
  auto below = [slack](const Vector& value, const Vector& image) {
    for (std::size_t k = 0; k < value.size(); ++k) {
      if (!(value[k] <= image[k] + slack * (1.0 + std::abs(image[k])))) {
        return false;
      }
    }
    return true;
  };
  const auto& F = problem.F;
  if (!below(b.x, F(b.x, b.v, b.z))) return 0;
  if (!below(b.y, F(b.y, b.u, b.z))) return 1;
  if (!below(b.z, F(b.z, b.v, b.x))) return 2;
  if (!below(F(b.u, b.y, b.w), b.u)) return 3;
  if (!below(F(b.v, b.x, b.w), b.v)) return 4;
  if (!below(F(b.w, b.y, b.u), b.w)) return 5;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Green's function and quadrature

void PbvsProblem::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ConfigError("period must be positive");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be positive");
  }
  if (grid_size < 3) {
    throw ConfigError("grid_size must be at least 3, got " +
                      std::to_string(grid_size));
  }
  if (!f) throw ConfigError("right-hand side f is missing");
}

double PbvsProblem::step() const {
  return period / static_cast<double>(grid_size - 1);
}

Vector PbvsProblem::grid() const {
  Vector t(grid_size);
  const double h = step();
  for (std::size_t k = 0; k < grid_size; ++k) {
    t[k] = static_cast<double>(k) * h;
  }
  t.back() = period;
  return t;
}

double green_kernel(double lambda, double period, double t, double s) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw ConfigError("Green's kernel is undefined for lambda = 0");
  }
  if (!(period > 0.0)) throw ConfigError("period must be positive");
  if (t < 0.0 || t > period || s < 0.0 || s > period) {
    throw ConfigError("kernel arguments must lie in [0, period]");
  }
  const bool below = s <= t;
  if (lambda > 0.0) {
    const double denom = -std::expm1(-lambda * period);
    return below ? std::exp(lambda * (s - t)) / denom
                 : std::exp(lambda * (s - t - period)) / denom;
  }
  const double denom = std::expm1(lambda * period);
  return below ? std::exp(lambda * (period + s - t)) / denom
               : std::exp(lambda * (s - t)) / denom;
}

namespace {

void require_kernel_args(double lambda, double period, std::size_t grid_size) {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(period > 0.0)) throw ConfigError("period must be positive");
  if (grid_size < 3) throw ConfigError("grid_size must be at least 3");
}

}  // namespace

Vector trapezoid_kernel_row_sums(double lambda, double period,
                                 std::size_t grid_size) {
  require_kernel_args(lambda, period, grid_size);
  const std::size_t n = grid_size;
  const double h = period / static_cast<double>(n - 1);
  const double denom = -std::expm1(-lambda * period);
  Vector sums(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double total = 0.0;
    // [0, t_k], kernel limit from below at the diagonal.
    if (k > 0) {
      double acc = 0.0;
      for (std::size_t l = 0; l <= k; ++l) {
        const double g =
            std::exp(lambda * h * (static_cast<double>(l) - static_cast<double>(k))) /
            denom;
        acc += (l == 0 || l == k) ? 0.5 * g : g;
      }
      total += h * acc;
    }
    // [t_k, T], kernel limit from above.
    if (k + 1 < n) {
      double acc = 0.0;
      for (std::size_t l = k; l < n; ++l) {
        const double g =
            std::exp(lambda * (h * (static_cast<double>(l) -
                                    static_cast<double>(k)) -
                               period)) /
            denom;
        acc += (l == k || l == n - 1) ? 0.5 * g : g;
      }
      total += h * acc;
    }
    sums[k] = total;
  }
  return sums;
}

GreenQuadrature::GreenQuadrature(double lambda, double period,
                                 std::size_t grid_size)
    : size_(grid_size), weights_(grid_size * grid_size, 0.0) {
  require_kernel_args(lambda, period, grid_size);
  const std::size_t n = grid_size;
  const double h = period / static_cast<double>(n - 1);
  const double denom = -std::expm1(-lambda * period);
  // Moments of e^{lambda u} against the two hat-function halves on [0, h].
  const double z = lambda * h;
  const double e1 = std::expm1(z) / z;  // (e^z - 1) / z
  const double left = (e1 - 1.0) / lambda;
  const double right = (std::exp(z) - e1) / lambda;

  auto fill_row = [&](std::size_t k) {
    double* row = &weights_[k * n];
    for (std::size_t l = 0; l + 1 < n; ++l) {
      const double offset =
          h * (static_cast<double>(l) - static_cast<double>(k));
      // Cells left of t_k use the s < t branch, cells right of it the other.
      const double exponent = l < k ? lambda * offset
                                    : lambda * (offset - period);
      const double scale = std::exp(exponent) / denom;
      row[l] += scale * left;
      row[l + 1] += scale * right;
    }
  };
  for (std::size_t k = 0; k + 1 < n; ++k) fill_row(k);
  // t = T and t = 0 see the same kernel.
  std::copy_n(weights_.begin(), n, weights_.begin() + (n - 1) * n);
}

Vector GreenQuadrature::apply(std::span<const double> h) const {
  if (h.size() != size_) {
    throw StructuralError("grid function has " + std::to_string(h.size()) +
                          " nodes, quadrature expects " +
                          std::to_string(size_));
  }
  Vector out(size_, 0.0);
  for (std::size_t k = 0; k < size_; ++k) {
    double acc = 0.0;
    const double* row = &weights_[k * size_];
    for (std::size_t l = 0; l < size_; ++l) acc += row[l] * h[l];
    out[k] = acc;
  }
  return out;
}

Vector GreenQuadrature::row_sums() const {
  return apply(Vector(size_, 1.0));
}

TripledProblem pbvs_operator(const PbvsProblem& problem) {
  problem.validate();
  auto quad = std::make_shared<const GreenQuadrature>(
      problem.lambda, problem.period, problem.grid_size);
  const Vector t = problem.grid();
  const RightHandSide f = problem.f;
  const double lambda = problem.lambda;
  const std::size_t n = problem.grid_size;

  TripledProblem out;
  out.dimension = n;
  out.metric = MetricKind::Supremum;
  out.phi = problem.phi;
  out.F = [quad, t, f, lambda, n](const Vector& x, const Vector& y,
                                  const Vector& z) {
    if (x.size() != n || y.size() != n || z.size() != n) {
      throw StructuralError("grid function length does not match grid_size");
    }
    Vector integrand(n);
    for (std::size_t l = 0; l < n; ++l) {
      integrand[l] = f(t[l], x[l], y[l], z[l]) + lambda * x[l];
    }
    return quad->apply(integrand);
  };
  return out;
}

LowerUpperReport verify_lower_upper(const PbvsProblem& problem,
                                    const CoupledLowerUpperSolution& c,
                                    double slack) {
  problem.validate();
  const std::size_t n = problem.grid_size;
  for (const Vector* v : {&c.x, &c.y, &c.z, &c.u, &c.v, &c.w}) {
    if (v->size() != n) {
      throw StructuralError("candidate grid function has " +
                            std::to_string(v->size()) + " nodes, grid has " +
                            std::to_string(n));
    }
  }
  const TripledProblem tripled = pbvs_operator(problem);
  const auto& F = tripled.F;

  struct Inequality {
    const Vector* value;
    Vector image;
    bool lower;
  };
  const std::array<Inequality, 6> checks = {{
      {&c.x, F(c.x, c.v, c.z), true},
      {&c.y, F(c.y, c.u, c.z), true},
      {&c.z, F(c.z, c.v, c.x), true},
      {&c.u, F(c.u, c.y, c.w), false},
      {&c.v, F(c.v, c.x, c.w), false},
      {&c.w, F(c.w, c.y, c.u), false},
  }};

  LowerUpperReport report;
  for (std::size_t q = 0; q < checks.size(); ++q) {
    const auto& chk = checks[q];
    for (std::size_t k = 0; k < n; ++k) {
      const double value = (*chk.value)[k];
      const double image = chk.image[k];
      const double allowance = slack * (1.0 + std::abs(image));
      const bool ok = chk.lower ? value <= image + allowance
                                : value >= image - allowance;
      if (!ok) {
        report.first_violation = LowerUpperViolation{q, k, value, image};
        return report;
      }
    }
  }
  report.holds = true;
  return report;
}

double pbvs_defect(const PbvsProblem& problem, std::span<const double> x,
                   std::span<const double> y, std::span<const double> z) {
  problem.validate();
  const std::size_t n = problem.grid_size;
  if (x.size() != n || y.size() != n || z.size() != n) {
    throw StructuralError("grid function length does not match grid_size");
  }
  const Vector t = problem.grid();
  const double h = problem.step();
  // Nodes 0 and n-1 are the same point of the period; differentiate on the
  // n-1 distinct nodes with periodic wrap-around.
  const std::size_t m = n - 1;
  auto derivative = [&](std::span<const double> v, std::size_t k) {
    const double next = v[k + 1];
    const double prev = k == 0 ? v[m - 1] : v[k - 1];
    return (next - prev) / (2.0 * h);
  };
  double defect = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    defect = std::max(
        {defect, std::abs(derivative(x, k) - problem.f(t[k], x[k], y[k], z[k])),
         std::abs(derivative(y, k) - problem.f(t[k], y[k], x[k], z[k])),
         std::abs(derivative(z, k) - problem.f(t[k], z[k], y[k], x[k]))});
  }
  return defect;
}

PbvsSolution solve_pbvs(const PbvsProblem& problem,
                        const std::optional<CoupledLowerUpperSolution>& bounds,
                        const SolveConfig& config) {
  problem.validate();
  config.validate();
  const std::size_t n = problem.grid_size;

  ProductPoint start_u = ProductPoint::filled({n, n, n}, 0.0);
  ProductPoint start_v = start_u;
  if (bounds) {
    const LowerUpperReport check = verify_lower_upper(problem, *bounds);
    if (!check.holds) {
      const auto& v = *check.first_violation;
      throw ValidationError(
          "coupled lower/upper candidate fails inequality " +
          std::to_string(v.inequality) + " at node " + std::to_string(v.node));
    }
    start_u = ProductPoint({bounds->x, bounds->y, bounds->z});
    start_v = ProductPoint({bounds->u, bounds->v, bounds->w});
  }

  const PartiallyMonotoneSystem system =
      tripled_to_system(pbvs_operator(problem));

  PbvsSolution out;
  out.result = solve(system, start_u, start_v, config);
  out.t = problem.grid();
  out.x = out.result.solution[0];
  out.y = out.result.solution[1];
  out.z = out.result.solution[2];
  out.defect = pbvs_defect(problem, out.x, out.y, out.z);
  return out;
}

}  // namespace mfix
