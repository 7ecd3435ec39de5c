#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hmmrd/errors.hpp"
#include "hmmrd/reaction.hpp"

using namespace hmmrd;

TEST_CASE("barkley kinetics match the defining formulas") {
  const BarkleyParams params{0.005, 0.3, 0.01, 0.1};
  const AffineReaction r = barkley(params);

  SUBCASE("u = 0 and u = 1 are roots of f for any v") {
    for (double v : {-1.0, 0.0, 0.3, 1.0, 7.5}) {
      CHECK(r.f(0.0, v) == doctest::Approx(0.0).epsilon(1e-15));
      CHECK(r.f(1.0, v) == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
  SUBCASE("g vanishes on the diagonal") {
    for (double u : {-2.0, 0.0, 0.5, 1.0, 3.0}) CHECK(r.g(u, u) == doctest::Approx(0.0));
  }
  SUBCASE("point evaluation against independent arithmetic") {
    // (1/0.005) * 0.5 * 0.5 * (0.5 - (0.1+0.01)/0.3) = 50 * (0.5 - 11/30) = 20/3
    const double expected = (1.0 / 0.005) * 0.5 * 0.5 * (0.5 - (0.1 + 0.01) / 0.3);
    CHECK(expected == doctest::Approx(20.0 / 3.0).epsilon(1e-14));
    CHECK(r.f(0.5, 0.1) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("decomposition: f is affine in v with slope f2") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      const double s = unif(rng);
      const double v1 = unif(rng);
      const double v2 = unif(rng);
      const double lhs = r.f(s, v1) - r.f(s, v2);
      const double rhs = r.f2(s) * (v1 - v2);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      CHECK(r.g(s, v1) - r.g(s, v2) == doctest::Approx(r.alpha * (v1 - v2)).epsilon(1e-12));
    }
  }
  SUBCASE("sign structure around the excitation threshold") {
    const double v = 0.05;
    const double u_th = (v + params.b) / params.a;  // 0.2
    REQUIRE(u_th > 0.0);
    REQUIRE(u_th < 1.0);
    for (double u = 0.02; u < u_th - 0.02; u += 0.02) CHECK(r.f(u, v) < 0.0);
    for (double u = u_th + 0.02; u < 0.98; u += 0.02) CHECK(r.f(u, v) > 0.0);
  }
  SUBCASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(barkley({-1.0, 0.3, 0.01, 0.1}), ValidationError);
    CHECK_THROWS_AS(barkley({0.005, 0.0, 0.01, 0.1}), ValidationError);
  }
}

TEST_CASE("nullcline diagnostics") {
  const BarkleyParams params{0.005, 0.3, 0.01, 0.1};
  const NullclineDiagnostics d = nullcline_diagnostics(params);
  CHECK(d.threshold(0.0) == doctest::Approx(1.0 / 30.0).epsilon(1e-14));
  CHECK(d.fixed_points[0].first == 0.0);
  CHECK(d.fixed_points[0].second == 0.0);
  CHECK(d.fixed_points[1].first == 1.0);
  CHECK(d.fixed_points[1].second == 1.0);

  // fixed points do not depend on rho and annihilate both kinetics
  for (double rho : {0.005, 0.0208, 1.0}) {
    const AffineReaction r = barkley({rho, params.a, params.b, params.delta});
    for (const auto& [u, v] : d.fixed_points) {
      CHECK(r.f(u, v) == doctest::Approx(0.0).epsilon(1e-13));
      CHECK(r.g(u, v) == doctest::Approx(0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("growth admissibility") {
  SUBCASE("linear kinetics admit global constants") {
    AffineReaction linear;
    linear.f1 = [](double s) { return 2.0 + 0.5 * s; };
    linear.f2 = [](double) { return 1.5; };
    linear.g1 = [](double s) { return -s; };
    linear.alpha = 0.25;
    const GrowthBoundReport report = growth_admissibility_check(linear, -10.0, 10.0);
    CHECK(report.globally_admissible);
    CHECK(report.c3 == doctest::Approx(1.5));
    // the reported constants bound the sampled functions on the interval
    for (double s = -10.0; s <= 10.0; s += 0.37) {
      CHECK(std::abs(linear.f1(s)) <= report.c1 + report.c2 * std::abs(s) + 1e-12);
      CHECK(std::abs(linear.g1(s)) <= report.c4 + report.c5 * std::abs(s) + 1e-12);
    }
  }
  SUBCASE("Barkley admits interval constants but no global linear bound") {
    const AffineReaction r = barkley({0.005, 0.3, 0.01, 0.1});
    const GrowthBoundReport report = growth_admissibility_check(r, -0.1, 1.1);
    CHECK(std::isfinite(report.c1));
    CHECK(std::isfinite(report.c2));
    CHECK(std::isfinite(report.c3));
    for (double s = -0.1; s <= 1.1; s += 0.013) {
      CHECK(std::abs(r.f1(s)) <= report.c1 + report.c2 * std::abs(s) + 1e-9);
      CHECK(std::abs(r.f2(s)) <= report.c3 + 1e-9);
    }
    CHECK_FALSE(report.globally_admissible);  // cubic growth
  }
  SUBCASE("empty interval is rejected") {
    CHECK_THROWS_AS(growth_admissibility_check(zero_reaction(), 1.0, 1.0), ValidationError);
  }
}

TEST_CASE("zero reaction") {
  const AffineReaction r = zero_reaction();
  CHECK(r.f(0.3, -2.0) == 0.0);
  CHECK(r.g(1.7, 0.4) == 0.0);
}
