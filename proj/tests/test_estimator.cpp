#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsdp/error.hpp"
#include "qsdp/estimator.hpp"

#include <cmath>

using namespace qsdp;

TEST_CASE("case 2 at the starting point") {
  const SeededInstance s = seeded_case2();
  const ResourceReport r = estimate(s.instance, s.y0, 0.2, 0.01);
  CHECK(r.kappa_H == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.kappa_S == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.t_iter == doctest::Approx((3 * r.mu_A + 9 * r.mu_S) * r.kappa_A * r.kappa_S * 8).epsilon(1e-12));
  CHECK(r.t_total == doctest::Approx(std::sqrt(3.0) * std::log(100.0) * r.t_iter).epsilon(1e-12));
  CHECK(r.mu_S > 0);
  CHECK(r.mu_A > 0);
  CHECK(r.norm_H == doctest::Approx(0.08));
}

TEST_CASE("per-iteration cost recomposes from the reported fields") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SeededInstance s = gen_random_wellcond(4, 6, 8.0, seed);
    const ResourceReport r = estimate(s.instance, s.y0, s.eta0, 0.01);
    const double again = (6 * r.mu_A + 16 * r.mu_S) * r.kappa_A * r.kappa_S * std::pow(r.kappa_H, 3);
    CHECK(std::abs(r.t_iter - again) <= 1e-12 * r.t_iter);
    CHECK(per_iteration_cost(r, 4, 6) == r.t_iter);
  }
}

TEST_CASE("condition numbers do not depend on the instance scale") {
  const SeededInstance s = gen_random_wellcond(3, 4, 6.0, 11);
  const ResourceReport base = estimate(s.instance, s.y0, s.eta0, 0.01);
  for (double t : {0.1, 10.0}) {
    const ResourceReport r = estimate(s.instance.scaled(t), s.y0, s.eta0, 0.01);
    CHECK(std::abs(r.kappa_A - base.kappa_A) <= 1e-9 * base.kappa_A);
    CHECK(std::abs(r.kappa_S - base.kappa_S) <= 1e-9 * base.kappa_S);
    CHECK(std::abs(r.kappa_H - base.kappa_H) <= 1e-9 * base.kappa_H);
  }
}

TEST_CASE("plug-in total") {
  const SeededInstance s = seeded_case2();
  const ResourceReport r = estimate(s.instance, s.y0, 0.2, 0.01);
  const double hand = std::sqrt(3.0) * (9.0 + std::pow(3.0, 2.5));
  CHECK(std::abs(r.plugin_total - hand) <= 1e-9);
  CHECK(hand == doctest::Approx(42.58).epsilon(1e-3));
}

TEST_CASE("infeasible point") {
  const SdpInstance c2 = gen_case2();
  CHECK_THROWS_AS(estimate(c2, Vector::Ones(3), 1.0, 0.01), Error);
}
