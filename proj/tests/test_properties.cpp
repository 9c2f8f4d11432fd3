#include <doctest.h>

#include "criteria.hpp"
#include "mfix/solver.hpp"
#include "mfix/verify.hpp"
#include "oracles.hpp"

using namespace mfix;

// The acceptance checks again, on seeds the acceptance binary does not use.

TEST_CASE("selector identities on fresh seeds") {
  for (std::uint64_t seed : {101u, 202u}) {
    const auto r = criteria::selector_identities(1000, seed);
    INFO(r.detail);
    CHECK(r.passed);
  }
}

TEST_CASE("composition algebra on fresh seeds") {
  const auto r = criteria::algebra_laws(1000, 303);
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("affine solver against the linear solve") {
  const auto r = criteria::affine_oracle(20, 3, 404);
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("tripled hypothesis transfer") {
  const auto r = criteria::tripled_transfer(10, 300, 505);
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("admissible bounds bracket a nonlinear iteration") {
  oracle::Rng rng(606);
  std::size_t steps = 0;
  for (int s = 0; s < 30; ++s) {
    const std::size_t n = oracle::uniform_index(rng, 2, 5);
    const auto prof = oracle::random_profile(rng, n);
    const auto sys = oracle::random_monotone_system(
        rng, oracle::random_signature(rng, n), prof, 0.8);
    // |T(x)| <= 1 + 0.8 R keeps [-R, R] invariant once R >= 5.
    const auto lo = ProductPoint::filled(prof, -10.0);
    const auto hi = ProductPoint::filled(prof, 10.0);
    REQUIRE(verify_coupled_bounds(sys, lo, hi).holds);

    std::optional<CoupledIterationState> prev;
    SolveConfig cfg;
    cfg.tolerance = 1e-11;
    const auto r = solve(sys, lo, hi, cfg, [&](const CoupledIterationState& st) {
      CHECK(product_leq(st.u, st.v));
      CHECK(st.bracket_valid);
      if (prev) {
        CHECK(product_leq(prev->u, st.u));
        CHECK(product_leq(st.v, prev->v));
        ++steps;
      }
      prev = st;
    });
    CHECK(r.converged());
    CHECK(r.bracket_valid);
  }
  CHECK(steps > 100);
}

TEST_CASE("the companion operator is mixed monotone and reproduces T on the diagonal") {
  oracle::Rng rng(707);
  for (int s = 0; s < 1000; ++s) {
    const std::size_t n = oracle::uniform_index(rng, 2, 6);
    const auto prof = oracle::random_profile(rng, n);
    const auto sys =
        oracle::random_monotone_system(rng, oracle::random_signature(rng, n), prof);
    const auto op = build_mixed_operator(sys);
    const auto x = oracle::random_point(rng, prof);
    const auto v = oracle::random_point(rng, prof);
    CHECK(op(x, x) == sys.apply(x));
    const auto u = oracle::shifted_up(rng, x);
    const auto y = oracle::shifted_up(rng, v);
    CHECK(product_leq(op(x, y), op(u, v)));
  }
}
