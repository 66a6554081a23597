// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hoc/discrete.hpp"
#include "hoc/errors.hpp"
#include "hoc/finite_space.hpp"
#include "hoc/tensor.hpp"
#include "oracles.hpp"

using namespace hoc;

namespace {

ValueTable random_table(const FiniteProductSpace& s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ValueTable f(s.size());
  for (double& v : f) v = g(rng);
  return f;
}

ValueTable cyclic(const FiniteProductSpace& s) {
  const int n = s.n();
  return tabulate(s, [n](std::span<const double> x) {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += x[i] * x[(i + 1) % n];
    return t;
  });
}

}  // namespace

TEST_CASE("cube encoding matches the oracle spins") {
  const FiniteProductSpace s = FiniteProductSpace::rademacher(4);
  CHECK(s.size() == 16);
  for (std::size_t c = 0; c < s.size(); ++c) {
    const auto x = oracle::spins(c, 4);
    for (int i = 0; i < 4; ++i) CHECK(s.label(c, i) == x[i]);
    CHECK(s.encode(s.symbols(c)) == c);
  }
  CHECK(s.replace(0, 0, 1) == 8);
}

TEST_CASE("space validation") {
  CHECK_THROWS_AS(FiniteProductSpace({{0, 1}}, {0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(FiniteProductSpace({{0, 1}}, {1.0}), ShapeError);
  const FiniteProductSpace p = FiniteProductSpace::product({{0, 1}, {0, 1, 2}}, {{0.5, 0.5}, {0.2, 0.3, 0.5}});
  CHECK(p.probability(p.encode(std::vector<int>{1, 2})) == doctest::Approx(0.25));
  CHECK(p.conditional(0, 1)[2] == doctest::Approx(0.5));
}

TEST_CASE("first and second differences agree with the oracle") {
  const int n = 5;
  const FiniteProductSpace s = FiniteProductSpace::rademacher(n);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const ValueTable f = random_table(s, rng);
    for (std::size_t c = 0; c < s.size(); ++c) {
      CHECK((h_vectors(f, s, c).h - oracle::cube_h(f, n, c)).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((h_tensor(f, s, 2, c).tensor().as_matrix() - oracle::cube_h2(f, n, c)).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("positive and negative parts") {
  const FiniteProductSpace s = FiniteProductSpace::rademacher(1);
  const ValueTable f{-1.0, 2.0};
  const HValues lo = h_ops(f, s, 0, 0), hi = h_ops(f, s, 1, 0);
  CHECK(lo.h == 3.0);
  CHECK(lo.h_plus == 0.0);
  CHECK(lo.h_minus == 3.0);
  CHECK(hi.h_plus == 3.0);
}

TEST_CASE("second differences of a quadratic") {
  const FiniteProductSpace s = FiniteProductSpace::rademacher(3);
  const ValueTable f = tabulate(s, [](std::span<const double> x) { return 2.0 * x[0] * x[1] - x[1] * x[2]; });
  const Eigen::MatrixXd h = h_tensor(f, s, 2, 5).tensor().as_matrix();
  CHECK(h(0, 1) == doctest::Approx(8.0));
  CHECK(h(1, 2) == doctest::Approx(4.0));
  CHECK(h(0, 2) == doctest::Approx(0.0));
  CHECK(h(1, 1) == 0.0);
  CHECK(hs_norm(h_tensor(f, s, 3, 0)) == doctest::Approx(0.0));
}

TEST_CASE("operator-norm recursion and its failure without the positive part") {
  // The positive-part recursion holds on random tables.
  const FiniteProductSpace s5 = FiniteProductSpace::rademacher(5);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const ValueTable f = random_table(s5, rng);
    const ValueTable h1 = h_norm_table(f, s5);
    for (std::size_t c = 0; c < s5.size(); ++c)
      CHECK(h_vectors(h1, s5, c).h_plus.norm() <= oracle::sym_op2(oracle::cube_h2(f, 5, c)) + 1e-12);
  }
  // The cyclic sum violates the unsigned version for n = 4 and n = 8.
  for (int n : {4, 8}) {
    const FiniteProductSpace s = FiniteProductSpace::rademacher(n);
    const ValueTable f = cyclic(s);
    const ValueTable h1 = h_norm_table(f, s);
    double margin = -1e300;
    for (std::size_t c = 0; c < s.size(); ++c)
      margin = std::max(margin, h_vectors(h1, s, c).h.norm() - oracle::sym_op2(oracle::cube_h2(f, n, c)));
    CHECK(margin > 1.0);
  }
}

TEST_CASE("d operator on a product space") {
  const FiniteProductSpace s = FiniteProductSpace::rademacher(2);
  const ValueTable f{0.0, 1.0, 2.0, 5.0};
  // Uniform two-point marginals: d_i f = |f(x) - f(flip_i x)| / 2.
  const Eigen::VectorXd d = d_operator(f, s, 0);
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(0.5));
}

TEST_CASE("dependence profile") {
  const DependenceProfile u = dependence_profile(FiniteProductSpace::rademacher(3));
  CHECK(u.J.cwiseAbs().maxCoeff() == 0.0);
  CHECK(u.beta_tilde == doctest::Approx(0.5));
  CHECK(u.alpha2 == doctest::Approx(1.0));

  // Two spins with coupling c: flipping one spin moves the other's
  // conditional law by tanh(βc) in total variation.
  IsingSpec sp;
  sp.n = 2;
  sp.edges = {{0, 1, 0.4}};
  sp.beta = 1.0;
  const FiniteProductSpace is = ising(sp);
  CHECK(is.probability(3) / is.probability(1) == doctest::Approx(std::exp(0.8)));
  const DependenceProfile p = dependence_profile(is);
  CHECK(p.J(0, 1) == doctest::Approx(std::tanh(0.4)));
  CHECK(p.J_opnorm == doctest::Approx(std::tanh(0.4)));

  sp.beta = 0.0;
  CHECK(dependence_profile(ising(sp)).J.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dlsi constant domain") {
  CHECK_THROWS_AS(dlsi_constant(0.5, 0.0), DobrushinError);
  CHECK_THROWS_AS(dlsi_constant(1.5, 0.5), DomainError);
  CHECK(dlsi_constant(0.5, 1.0).sigma2 > 0.0);
  IsingSpec sp;
  sp.n = 4;
  sp.edges = {{0, 1, 3.0}, {0, 2, 3.0}, {0, 3, 3.0}, {1, 2, 3.0}, {1, 3, 3.0}, {2, 3, 3.0}};
  CHECK_THROWS_AS(dlsi_constant(dependence_profile(ising(sp))), DobrushinError);
}

TEST_CASE("exact distribution and moments") {
  const FiniteProductSpace s = FiniteProductSpace::rademacher(2);
  const ValueTable f = tabulate(s, [](std::span<const double> x) { return x[0] + x[1]; });
  const auto dist = exact_distribution(f, s);
  REQUIRE(dist.size() == 3);
  CHECK(dist[1].first == 0.0);
  CHECK(dist[1].second == doctest::Approx(0.5));
  CHECK(exact_mean(f, s) == doctest::Approx(0.0));
  CHECK(exact_moment(f, s, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(lr_norm(f, s, std::numeric_limits<double>::infinity()) == 2.0);
}

TEST_CASE("entropy against the oracle") {
  const FiniteProductSpace s = FiniteProductSpace::rademacher(3);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const ValueTable f = random_table(s, rng);
    CHECK(entropy_of_square(f, s) == doctest::Approx(oracle::ent_sq(f)).epsilon(1e-12));
  }
  const ValueTable one(s.size(), 3.0);
  CHECK(std::abs(entropy_of_square(one, s)) < 1e-15);
  ValueTable g(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) g[c] = 1.0 + c;
  CHECK(phi_entropy(g, s, PowerEntropy{2.0}) > 0.0);
  CHECK(phi_entropy(g, s, LogEntropy{}) > 0.0);
}

TEST_CASE("cost guard") {
  const FiniteProductSpace s = FiniteProductSpace::rademacher(20);
  const ValueTable f(s.size(), 0.0);
  CHECK_THROWS_AS(h_tensor(f, s, 10, 0), CostGuardError);
}

TEST_CASE("enumeration limit") {
  CHECK_THROWS(FiniteProductSpace::rademacher(23));
}
