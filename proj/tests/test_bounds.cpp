// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hoc/bounds.hpp"
#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"
#include "oracles.hpp"

using namespace hoc;

TEST_CASE("catalog settings validate") {
  CatalogParams prm;
  prm.n = 10;
  prm.k = 3;
  prm.p = 3.0;
  prm.sigma2 = 2.0;
  prm.sigma_q = 1.5;
  prm.d = 2;
  for (const auto& tag : catalog_tags()) {
    CAPTURE(tag);
    const Setting s = setting_catalog(tag, prm);
    CHECK_NOTHROW(s.validate());
    CHECK(s.d == 2);
  }
  CHECK_THROWS_AS(setting_catalog("nope", prm), DomainError);
  CHECK_THROWS_AS(setting_catalog("lsi", {}), DomainError);
}

TEST_CASE("setting validation") {
  Setting s;
  s.p = -1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = Setting{};
  s.q = 3.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = Setting{};
  CHECK_THROWS_AS(s.with_levels(0), DomainError);
}

TEST_CASE("closed-form constants") {
  CHECK(const_C(2.0, 2.0, std::sqrt(8.0 * oracle::kKappa)) == doctest::Approx(oracle::kIndepLarge).epsilon(1e-14));
  const Setting lsi = setting_catalog("lsi", {.sigma2 = 1.0, .d = 3});
  CHECK(const_c(lsi.p, lsi.d, lsi.r0, lsi.L) == doctest::Approx(oracle::kLsiSmall).epsilon(1e-14));
  CHECK(hw_constant(setting_catalog("gaussian", {})) == doctest::Approx(oracle::kHwGauss).epsilon(1e-14));
  // Below L = 1 the c formula uses L^{1/d}.
  CHECK(const_c(2.0, 2, 2.0, 0.25) == doctest::Approx(const_c(2.0, 1, 2.0, 0.5)).epsilon(1e-14));
}

TEST_CASE("tail bound monotonicity and scaling") {
  const Setting s = setting_catalog("lsi", {.sigma2 = 1.5, .d = 3});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const LevelCoefficients K{{u(rng), u(rng), u(rng)}};
    const double t = u(rng) * 4.0;
    CHECK(tail_bound(s, K, t + 0.5) <= tail_bound(s, K, t));
    LevelCoefficients K2 = K;
    K2.K[1] *= 1.5;
    CHECK(tail_bound(s, K2, t) >= tail_bound(s, K, t));
    const double a = u(rng);
    LevelCoefficients Ka{{a * K.K[0], a * K.K[1], a * K.K[2]}};
    CHECK(tail_bound(s, Ka, a * t) == doctest::Approx(tail_bound(s, K, t)).epsilon(1e-12));
    CHECK(tail_bound(s, K, t) <= 1.0);
  }
}

TEST_CASE("moment route reproduces the tail bound") {
  const Setting s = setting_catalog("independent_bounded", {.d = 3});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const LevelCoefficients K{{u(rng), u(rng), u(rng)}};
    const MomentGrowthSpec m = moment_spec_from_levels(s, K);
    const double t = 10.0 * u(rng);
    CHECK(tail_from_moments(m, t) == doctest::Approx(tail_bound(s, K, t)).epsilon(1e-12));
    CHECK(moment_growth_bound(s, K, 4.0) > moment_growth_bound(s, K, 2.0));
  }
}

TEST_CASE("zero levels drop out and all-zero levels are degenerate") {
  const Setting s = setting_catalog("gaussian", {.d = 2});
  CHECK(tail_bound(s, {{0.0, 1.0}}, 300.0) == doctest::Approx(2.0 * std::exp(-oracle::kLsiLarge / 4.0 * 300.0)));
  CHECK(tail_bound(s, {{0.0, 0.0}}, 0.0) == 1.0);
  CHECK_THROWS_AS(tail_bound(s, {{0.0, 0.0}}, 1.0), DegenerateLevelsError);
  CHECK_THROWS_AS(tail_bound(s, {{1.0}}, 1.0), ShapeError);
  CHECK_THROWS_AS(tail_bound(s, {{1.0, -1.0}}, 1.0), DomainError);
}

TEST_CASE("exp-moment certificate") {
  const Setting s = setting_catalog("independent_bounded", {.d = 2});
  const ExpMomentCertificate c = exp_moment_certificate(s, {{1.0, 1.0}});
  CHECK(c.normalized);
  CHECK(c.exponent == doctest::Approx(1.0));
  CHECK(c.coefficient == doctest::Approx((std::sqrt(2.0) - 1) * (std::sqrt(2.0) - 1) / (64 * oracle::kKappa * oracle::kE)));
  CHECK_FALSE(exp_moment_certificate(s, {{1.0, 1.5}}).normalized);
}

TEST_CASE("hanson-wright crossover") {
  const Setting s = setting_catalog("gaussian", {.d = 2});
  const double hs = 3.0, op = 1.2;
  // The two terms of the minimum cross at t* = L^2 σ^2 hs^2 / op.
  const double ts = s.L * s.L * s.sigma * s.sigma * hs * hs / op;
  const double a = std::pow(ts / (s.L * s.sigma * s.sigma * hs), s.p);
  const double b = std::pow(ts / (s.sigma * s.sigma * op), s.p / 2);
  CHECK(std::abs(a - b) <= 1e-9 * a);
  CHECK(hw_bound(s, hs, op, 0.0) == 1.0);
  CHECK_THROWS_AS(hw_bound(s, 0.0, 0.0, 1.0), DegenerateLevelsError);
}

TEST_CASE("chaos bound") {
  CHECK(chaos_sup_bound({1.0, 2.0}, 0.0, 1.0, 1.0, 0.0) == 1.0);
  // d = 1: 2 exp(-(t/(e EW))^2 / (2 σ^2 (b-a)^2)).
  const double t = 5.0;
  const double expect = 2.0 * std::exp(-std::pow(t / (oracle::kE * 1.0), 2) / 2.0);
  CHECK(chaos_sup_bound({1.0}, 0.0, 1.0, 1.0, t) == doctest::Approx(std::min(1.0, expect)));
  const double e1 = -std::log(chaos_sup_bound({0.5}, 0.0, 1.0, 1.0, 12.0) / 2.0);
  const double e2 = -std::log(chaos_sup_bound({0.5}, 0.0, 2.0, 1.0, 12.0) / 2.0);
  CHECK(e2 == doctest::Approx(e1 / 4.0));
  CHECK_THROWS_AS(chaos_sup_bound({1.0}, 1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("constant table carries every setting") {
  const auto rows = stated_constant_table();
  CHECK(rows.size() == 14);
  for (const auto& r : rows) {
    CHECK(r.stated > 0.0);
    CHECK(r.engine > 0.0);
  }
  CHECK(rows[0].agrees);
  CHECK(rows[1].agrees);
  CHECK_FALSE(rows[2].agrees);
}
