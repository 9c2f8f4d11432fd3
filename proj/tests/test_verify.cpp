#include <doctest.h>

#include "mfix/errors.hpp"
#include "mfix/solver.hpp"
#include "mfix/systems.hpp"
#include "mfix/verify.hpp"
#include "oracles.hpp"

using namespace mfix;

namespace {

ProductPoint pt(std::vector<Vector> c) { return ProductPoint(std::move(c)); }

bool matches_witness(const MonotoneSignature& s, const std::vector<int>& eps) {
  for (std::size_t i = 0; i < s.order(); ++i)
    for (std::size_t j = 0; j < s.order(); ++j) {
      const int sign = s(i, j) == Monotonicity::Increasing ? 1 : -1;
      if (sign * eps[i] * eps[j] != 1) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("constant operators are certified for every comparison function") {
  std::vector<ComponentMap> ops = {
      [](const ProductPoint&) { return Vector{3.0}; },
      [](const ProductPoint&) { return Vector{-1.0, 2.0}; },
  };
  const PartiallyMonotoneSystem sys(MonotoneSignature::parse("-+/+-"), ops, {1, 2});
  const auto box = SamplingBox::uniform({1, 2}, -4.0, 4.0);
  for (const auto& phi : {ComparisonFunction::linear(0.0), ComparisonFunction::log(),
                          ComparisonFunction::rational()}) {
    const auto rep = verify_contraction(sys, phi, box, 500, 3);
    CHECK(rep.certified);
    CHECK(rep.violations.empty());
    CHECK(rep.max_ratio == 0.0);
    CHECK(rep.samples == 500);
  }
}

TEST_CASE("half-norm affine map is certified at one half") {
  const Matrix M = {{0.25, -0.25, 0.0}, {0.1, 0.0, -0.4}, {0.2, -0.3, 0.0}};
  // Blocks: component 0 = x0, component 1 = (x1, x2).
  const DimensionProfile prof{1, 2};
  const auto sig = affine_signature(M, prof);
  CHECK(sig.to_string() == "+-/+-");
  const auto sys = affine_system(sig, M, {1.0, 2.0, 3.0}, prof);
  const auto rep = verify_contraction(sys, ComparisonFunction::linear(0.5),
                                      SamplingBox::uniform(prof, -5, 5), 2000, 9);
  CHECK(rep.certified);
  CHECK(rep.max_ratio <= 0.5 + 1e-9);
  CHECK(rep.max_ratio >= 0.45);
  CHECK(std::string(ContractionReport::kSoundnessNote).find("not proof") !=
        std::string::npos);
}

TEST_CASE("a doubling component is reported") {
  const auto& entry = find_system("noncontraction");
  const auto sys = entry.build();
  const auto rep = verify_contraction(sys, entry.phi,
                                      SamplingBox::uniform(entry.profile, -1, 1),
                                      400, 5);
  CHECK_FALSE(rep.certified);
  REQUIRE_FALSE(rep.violations.empty());
  for (const auto& v : rep.violations) {
    CHECK(v.component == 0);
    const double gap = std::abs(v.x[0][0] - v.y[0][0]);
    CHECK(v.lhs == doctest::Approx(2.0 * gap).epsilon(1e-12));
    CHECK(v.rhs == doctest::Approx(0.9 * product_metric(v.x, v.y)).epsilon(1e-12));
    CHECK(v.lhs > v.rhs);
  }
  CHECK(rep.max_ratio == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("affine certification agrees with the row-sum test") {
  oracle::Rng rng(31);
  int certified = 0, rejected = 0;
  for (int s = 0; s < 200; ++s) {
    const std::size_t n = oracle::uniform_index(rng, 2, 4);
    const double alpha = oracle::uniform(rng, 0.3, 0.9);
    const bool inside = s % 2 == 0;
    const double budget = inside ? alpha : alpha * 1.3;
    auto inst = oracle::random_affine(rng, n, budget);
    if (!inside) {
      // push the largest row to the budget so the map is not an alpha-contraction
      const double rs = oracle::abs_row_sum(inst.M);
      for (auto& row : inst.M)
        for (auto& a : row) a *= budget / rs;
    }
    const bool expected = oracle::abs_row_sum(inst.M) <= alpha;
    const auto sys = affine_system(inst.signature, inst.M, inst.c, inst.profile);
    const auto rep = verify_contraction(sys, ComparisonFunction::linear(alpha),
                                        SamplingBox::uniform(inst.profile, -5, 5),
                                        1000, 100 + s);
    CHECK(rep.certified == expected);
    (expected ? certified : rejected)++;
  }
  CHECK(certified > 50);
  CHECK(rejected > 50);
}

TEST_CASE("component checks on explicit pairs") {
  const Matrix M = {{0.5, 0.0}, {0.0, 0.5}};
  const auto sys = affine_system(MonotoneSignature::parse("++/++"), M, {0, 0}, {1, 1});
  const std::vector<SamplePair> pairs = {
      {pt({{0}, {0}}), pt({{1}, {0}})},
      {pt({{0}, {0}}), pt({{0}, {4}})},
  };
  const auto checks =
      check_component_contraction(sys, ComparisonFunction::linear(0.5), 0, pairs);
  REQUIRE(checks.size() == 2);
  CHECK(checks[0] == ContractionCheck{0.5, 0.5, true});
  CHECK(checks[1] == ContractionCheck{0.0, 2.0, true});
  const auto strict =
      check_component_contraction(sys, ComparisonFunction::linear(0.4), 0, pairs);
  CHECK_FALSE(strict[0].holds);
}

TEST_CASE("degenerate sampling boxes are rejected") {
  const auto sys = find_system("noncontraction").build();
  const auto flat = SamplingBox::uniform({1, 1}, 1.0, 1.0);
  CHECK_THROWS_AS(verify_contraction(sys, ComparisonFunction::linear(0.5), flat, 10, 1),
                  ConfigError);
  const SamplingBox inverted{pt({{1}, {1}}), pt({{0}, {2}})};
  CHECK_THROWS_AS(inverted.validate(), ConfigError);
  CHECK_THROWS_AS(verify_contraction(sys, ComparisonFunction::linear(0.5),
                                     SamplingBox::uniform({1, 1}, 0, 1), 0, 1),
                  ConfigError);
}

TEST_CASE("declared monotonicity is checked on samples") {
  oracle::Rng rng(32);
  const auto sig = MonotoneSignature::parse("+-/-+");
  const auto sys = oracle::random_monotone_system(rng, sig, {2, 1});
  const auto box = SamplingBox::uniform({2, 1}, -3, 3);
  CHECK(check_declared_monotonicity(sys, box, 500, 1).consistent());
  CHECK_NOTHROW(build_validated_operator(sys, box, 500, 1));

  // Same maps, declared with the wrong signature.
  std::vector<ComponentMap> same = {
      [&](const ProductPoint& x) { return sys.evaluate(0, x); },
      [&](const ProductPoint& x) { return sys.evaluate(1, x); },
  };
  const PartiallyMonotoneSystem lying(MonotoneSignature::parse("++/++"), same,
                                      {2, 1});
  const auto rep = check_declared_monotonicity(lying, box, 500, 1);
  CHECK_FALSE(rep.consistent());
  CHECK_THROWS_AS(build_validated_operator(lying, box, 500, 1), ValidationError);
}

TEST_CASE("coupled bounds") {
  std::vector<ComponentMap> ops = {
      [](const ProductPoint& x) { return Vector{0.5 * x[0][0] - 0.25 * x[1][0] + 1.5}; },
      [](const ProductPoint& x) { return Vector{-0.5 * x[0][0] + 0.5 * x[1][0] + 1.0}; },
  };
  // Fixed point (4, -2) is exactly representable.
  const PartiallyMonotoneSystem sys(MonotoneSignature::parse("+-/-+"), ops, {1, 1});
  const auto xs = pt({{4}, {-2}});
  CHECK(sys.apply(xs) == xs);
  CHECK(verify_coupled_bounds(sys, xs, xs).holds);
  const auto r = solve_from_single_start(sys, xs, SolveConfig{});
  CHECK(verify_coupled_bounds(sys, r.solution, r.solution).holds);

  CHECK(verify_coupled_bounds(sys, pt({{3}, {-3}}), pt({{5}, {-1}})).holds);
  const auto bad = verify_coupled_bounds(sys, pt({{3.8}, {-3}}), pt({{5}, {-1}}));
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.first_failure.has_value());
  CHECK(bad.first_failure->component == 0);
  CHECK(bad.first_failure->lower_family);

  oracle::Rng rng(33);
  for (int s = 0; s < 100; ++s) {
    const std::size_t n = oracle::uniform_index(rng, 2, 5);
    const auto inst = oracle::random_affine(rng, n, 0.9);
    const auto sys2 = affine_system(inst.signature, inst.M, inst.c, inst.profile);
    const auto x = oracle::affine_fixed_point(inst.M, inst.c);
    const double delta = oracle::uniform(rng, 0.1, 3.0);
    Vector lo = x, hi = x;
    for (auto& a : lo) a -= delta;
    for (auto& a : hi) a += delta;
    CHECK(verify_coupled_bounds(sys2, ProductPoint::from_flat(lo, inst.profile),
                                ProductPoint::from_flat(hi, inst.profile))
              .holds);
  }
}

TEST_CASE("reducibility classifier") {
  const auto up = classify_reducibility(MonotoneSignature::parse("++/++"));
  CHECK(up.reducible);
  CHECK(up.witness == std::vector<int>{1, 1});
  const auto flip = classify_reducibility(MonotoneSignature::parse("+-/-+"));
  CHECK(flip.reducible);
  CHECK(flip.witness == std::vector<int>{1, -1});
  const auto no = classify_reducibility(MonotoneSignature::parse("++/-+"));
  CHECK_FALSE(no.reducible);
  CHECK_FALSE(no.witness.has_value());
  CHECK_FALSE(classify_reducibility(find_system("paper_example").signature).reducible);

  const auto c2 = count_reducible(2);
  CHECK(c2.total == 16);
  CHECK(c2.reducible == 2);
  const auto c3 = count_reducible(3);
  CHECK(c3.total == 512);
  CHECK(c3.reducible == 4);
  const auto c4 = count_reducible(4);
  CHECK(c4.total == 65536);
  CHECK(c4.reducible == 8);
  CHECK_THROWS_AS(count_reducible(1), ConfigError);
  CHECK_THROWS_AS(count_reducible(6), ConfigError);
}

TEST_CASE("reducible patterns are the symmetric rank-one sign patterns") {
  for (std::size_t n = 2; n <= 4; ++n) {
    const std::uint64_t total = std::uint64_t{1} << (n * n);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      const auto s = signature_from_mask(n, mask);
      const auto verdict = classify_reducibility(s);
      CHECK(verdict.reducible == oracle::brute_force_witness(s).has_value());
      if (!verdict.reducible) continue;
      auto eps = *verdict.witness;
      CHECK(matches_witness(s, eps));
      for (auto& e : eps) e = -e;
      CHECK(matches_witness(s, eps));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(s(i, i) == Monotonicity::Increasing);
        for (std::size_t j = 0; j < n; ++j) CHECK(s(i, j) == s(j, i));
      }
    }
  }
}
