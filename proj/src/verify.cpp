#include "mfix/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

namespace mfix {

namespace {

constexpr double kMinPerturbation = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-sample stream so samples can be drawn in any order.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t sample)
      : engine_(splitmix64(seed ^ splitmix64(sample + 1))) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  double log_uniform(double hi) {
    const double lo = std::min(kMinPerturbation, hi);
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit());
  }

 private:
  std::mt19937_64 engine_;
};

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

double sup_abs(const ProductPoint& p) {
  double m = 0.0;
  for (const auto& c : p.components()) m = std::max(m, sup_abs(c));
  return m;
}

double min_width(const SamplingBox& box) {
  double w = INFINITY;
  for (std::size_t j = 0; j < box.lower.size(); ++j) {
    for (std::size_t k = 0; k < box.lower[j].size(); ++k) {
      w = std::min(w, box.upper[j][k] - box.lower[j][k]);
    }
  }
  return w;
}

/// A pair (x, y) inside the box with y moved from x along `direction` (one
/// entry per component). The magnitudes are drawn first and x is then drawn
/// uniformly from the part of the box that keeps y inside it. Even samples
/// use one common magnitude for every coordinate, odd samples draw each
/// coordinate independently. With `only_component` the other components of
/// y equal those of x.
std::pair<ProductPoint, ProductPoint> draw_pair(
    SampleStream& rng, const SamplingBox& box,
    std::span<const Monotonicity> direction, bool common_magnitude,
    std::optional<std::size_t> only_component = {}) {
  const double common = common_magnitude ? rng.log_uniform(min_width(box)) : 0;
  std::vector<Vector> xs;
  std::vector<Vector> ys;
  for (std::size_t j = 0; j < box.lower.size(); ++j) {
    const bool moved = !only_component || *only_component == j;
    const bool up = direction[j] == Monotonicity::Increasing;
    Vector xc(box.lower[j].size());
    Vector yc(xc.size());
    for (std::size_t k = 0; k < xc.size(); ++k) {
      const double lo = box.lower[j][k];
      const double hi = box.upper[j][k];
      if (!moved) {
        xc[k] = yc[k] = rng.uniform(lo, hi);
        continue;
      }
      const double delta =
          common_magnitude ? common : rng.log_uniform(hi - lo);
      xc[k] = up ? rng.uniform(lo, hi - delta) : rng.uniform(lo + delta, hi);
      yc[k] = up ? xc[k] + delta : xc[k] - delta;
    }
    xs.push_back(std::move(xc));
    ys.push_back(std::move(yc));
  }
  return {ProductPoint(std::move(xs)), ProductPoint(std::move(ys))};
}

ContractionCheck contraction_on_pair(const PartiallyMonotoneSystem& system,
                                     const ComparisonFunction& phi,
                                     std::size_t i, const ProductPoint& x,
                                     const ProductPoint& y, double slack,
                                     double* ratio) {
  const Vector tx = system.evaluate(i, x);
  const Vector ty = system.evaluate(i, y);
  const double lhs = system.metric().component(i, tx, ty);
  const double spread = system.distance(x, y);
  const double rhs = phi(spread);
  const double scale =
      1.0 + sup_abs(tx) + sup_abs(ty) + sup_abs(x) + sup_abs(y);
  if (ratio != nullptr) *ratio = spread > 0.0 ? lhs / spread : 0.0;
  return {lhs, rhs, lhs <= rhs + slack * scale};
}

}  // namespace

SamplingBox SamplingBox::uniform(const DimensionProfile& profile, double lo,
                                 double hi) {
  return {ProductPoint::filled(profile, lo), ProductPoint::filled(profile, hi)};
}

void SamplingBox::validate() const {
  if (lower.profile() != upper.profile()) {
    throw ConfigError("sampling box bounds have different profiles");
  }
  for (std::size_t j = 0; j < lower.size(); ++j) {
    for (std::size_t k = 0; k < lower[j].size(); ++k) {
      const double w = upper[j][k] - lower[j][k];
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw ConfigError("sampling box is degenerate in component " +
                          std::to_string(j) + ", entry " + std::to_string(k));
      }
    }
  }
}

ContractionReport verify_contraction(const PartiallyMonotoneSystem& system,
                                     const ComparisonFunction& phi,
                                     const SamplingBox& box,
                                     std::size_t sample_count,
                                     std::uint64_t seed, double slack) {
  if (sample_count < 1) throw ConfigError("sample count must be at least 1");
  box.validate();
  system.check_point(box.lower);

  ContractionReport report;
  report.samples = sample_count;
  report.seed = seed;
  report.phi = phi.describe();
  report.slack = slack;

  for (std::size_t s = 0; s < sample_count; ++s) {
    SampleStream rng(seed, s);
    for (std::size_t i = 0; i < system.order(); ++i) {
      const auto [x, y] =
          draw_pair(rng, box, system.signature().row(i), s % 2 == 0);
      double ratio = 0.0;
      const ContractionCheck c =
          contraction_on_pair(system, phi, i, x, y, slack, &ratio);
      report.max_ratio = std::max(report.max_ratio, ratio);
      if (!c.holds) report.violations.push_back({i, s, x, y, c.lhs, c.rhs});
    }
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const auto& a, const auto& b) {
                     return std::pair(a.component, a.sample) <
                            std::pair(b.component, b.sample);
                   });
  report.certified = report.violations.empty();
  return report;
}

std::vector<ContractionCheck> check_component_contraction(
    const PartiallyMonotoneSystem& system, const ComparisonFunction& phi,
    std::size_t i, std::span<const SamplePair> pairs, double slack) {
  std::vector<ContractionCheck> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (!preceq_i(system, i, p.x, p.y)) {
      throw ValidationError("sample pair is not ordered for component " +
                            std::to_string(i));
    }
    out.push_back(contraction_on_pair(system, phi, i, p.x, p.y, slack, nullptr));
  }
  return out;
}

MonotonicityReport check_declared_monotonicity(
    const PartiallyMonotoneSystem& system, const SamplingBox& box,
    std::size_t sample_count, std::uint64_t seed, double slack) {
  if (sample_count < 1) throw ConfigError("sample count must be at least 1");
  box.validate();
  system.check_point(box.lower);

  const std::size_t n = system.order();
  const std::vector<Monotonicity> upward(n, Monotonicity::Increasing);
  MonotonicityReport report;
  report.samples = sample_count;
  report.seed = seed;

  for (std::size_t s = 0; s < sample_count; ++s) {
    SampleStream rng(seed, s);
    for (std::size_t j = 0; j < n; ++j) {
      const auto [x, y] = draw_pair(rng, box, upward, s % 2 == 0, j);
      const ProductPoint tx = system.apply(x);
      for (std::size_t i = 0; i < n; ++i) {
        const Vector ty = system.evaluate(i, y);
        const double scale = slack * (1.0 + sup_abs(tx[i]) + sup_abs(ty) +
                                      sup_abs(x) + sup_abs(y));
        const bool up = system.signature()(i, j) == Monotonicity::Increasing;
        bool ok = true;
        for (std::size_t k = 0; k < ty.size() && ok; ++k) {
          ok = up ? tx[i][k] <= ty[k] + scale : ty[k] <= tx[i][k] + scale;
        }
        if (!ok) report.violations.push_back({i, j, s});
      }
    }
  }
  return report;
}

MixedMonotoneOperator build_validated_operator(
    const PartiallyMonotoneSystem& system, const SamplingBox& box,
    std::size_t sample_count, std::uint64_t seed) {
  const MonotonicityReport report =
      check_declared_monotonicity(system, box, sample_count, seed);
  if (!report.consistent()) {
    const auto& v = report.violations.front();
    throw ValidationError(
        "declared signature is inconsistent: operator " +
        std::to_string(v.component) + " in variable " +
        std::to_string(v.variable) + " (sample " + std::to_string(v.sample) +
        ", " + std::to_string(report.violations.size()) + " violations)");
  }
  return build_mixed_operator(system);
}

CoupledBoundsReport verify_coupled_bounds(const PartiallyMonotoneSystem& system,
                                          const ProductPoint& x0,
                                          const ProductPoint& y0) {
  system.check_point(x0);
  system.check_point(y0);
  const MixedMonotoneOperator op = build_mixed_operator(system);
  CoupledBoundsReport report;
  for (std::size_t i = 0; i < system.order(); ++i) {
    const Vector lower_image = op.component(i, x0, y0);
    for (std::size_t k = 0; k < lower_image.size(); ++k) {
      if (!(x0[i][k] <= lower_image[k])) {
        report.first_failure = BoundsFailure{i, k, true, x0[i][k],
                                             lower_image[k]};
        return report;
      }
    }
    const Vector upper_image = op.component(i, y0, x0);
    for (std::size_t k = 0; k < upper_image.size(); ++k) {
      if (!(y0[i][k] >= upper_image[k])) {
        report.first_failure = BoundsFailure{i, k, false, y0[i][k],
                                             upper_image[k]};
        return report;
      }
    }
  }
  report.holds = true;
  return report;
}

// ---------------------------------------------------------------------------
// Reducibility

namespace {

/// Rows as bitmasks, bit j set when entry (i, j) is Decreasing. Reducible
/// iff entry (i, j) is Decreasing exactly when epsilon_i != epsilon_j. With
/// epsilon_0 = +1 the flip pattern is row 0 itself.
bool reducible_rows(std::span<const std::uint32_t> rows, std::size_t n) {
  const std::uint32_t full = (n >= 32) ? ~0U : ((1U << n) - 1U);
  const std::uint32_t flips = rows[0];
  if (flips & 1U) return false;
  for (std::size_t i = 1; i < n; ++i) {
    const std::uint32_t expected = (flips >> i) & 1U ? (~flips & full) : flips;
    if (rows[i] != expected) return false;
  }
  return true;
}

}  // namespace

ReducibilityVerdict classify_reducibility(const MonotoneSignature& signature) {
  const std::size_t n = signature.order();
  std::vector<std::uint32_t> rows(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (signature(i, j) == Monotonicity::Decreasing) rows[i] |= 1U << j;
    }
  }
  ReducibilityVerdict verdict;
  if (n > 32 || !reducible_rows(rows, n)) return verdict;
  verdict.reducible = true;
  std::vector<int> eps(n);
  for (std::size_t j = 0; j < n; ++j) eps[j] = (rows[0] >> j) & 1U ? -1 : 1;
  verdict.witness = std::move(eps);
  return verdict;
}

ReducibleCount count_reducible(std::size_t n) {
  if (n < 2 || n > 5) {
    throw ConfigError("exhaustive enumeration supports 2 <= n <= 5, got " +
                      std::to_string(n));
  }
  const std::uint64_t total = 1ULL << (n * n);
  const std::uint32_t row_mask = (1U << n) - 1U;
  std::uint64_t reducible = 0;
  std::vector<std::uint32_t> rows(n);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < n; ++i) {
      rows[i] = static_cast<std::uint32_t>(mask >> (i * n)) & row_mask;
    }
    if (reducible_rows(rows, n)) ++reducible;
  }
  return {total, reducible};
}

MonotoneSignature signature_from_mask(std::size_t n, std::uint64_t mask) {
  if (n * n > 64) throw ConfigError("signature mask supports n <= 8");
  std::vector<Monotonicity> entries(n * n);
  for (std::size_t b = 0; b < n * n; ++b) {
    entries[b] = (mask >> b) & 1ULL ? Monotonicity::Decreasing
                                    : Monotonicity::Increasing;
  }
  return MonotoneSignature(n, std::move(entries));
}

}  // namespace mfix
