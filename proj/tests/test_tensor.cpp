// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"
#include "hoc/tensor.hpp"
#include "oracles.hpp"

using namespace hoc;

namespace {

Tensor random_tensor(int j, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> e(static_cast<std::size_t>(std::pow(n, j)));
  for (double& v : e) v = g(rng);
  return Tensor(j, n, e);
}

}  // namespace

TEST_CASE("layout is row-major with the first index slowest") {
  Tensor t(3, 2);
  const int idx[] = {1, 0, 1};
  CHECK(t.flat_index(idx) == 5);
  int back[3];
  t.unflatten(6, back);
  CHECK(back[0] == 1);
  CHECK(back[1] == 1);
  CHECK(back[2] == 0);
  CHECK_THROWS_AS(Tensor(2, 2, {1.0, 2.0, 3.0}), ShapeError);
}

TEST_CASE("symmetrization averages orbits") {
  const Tensor t(2, 2, {1.0, 2.0, 4.0, 3.0});
  const SymTensor s(t);
  CHECK(s[1] == doctest::Approx(3.0));
  CHECK(s[2] == doctest::Approx(3.0));
  CHECK(s.tensor().is_symmetric());
  CHECK_THROWS_AS(SymTensor::checked(t), DomainError);
  std::mt19937_64 rng(1);
  const SymTensor s3(random_tensor(3, 3, rng));
  CHECK(s3.tensor().is_symmetric(1e-15));
}

TEST_CASE("hs norm and contraction") {
  const Tensor t(2, 2, {3.0, 0.0, 0.0, 4.0});
  CHECK(hs_norm(t) == doctest::Approx(5.0));
  const Eigen::VectorXd e0 = Eigen::VectorXd::Unit(2, 0), e1 = Eigen::VectorXd::Unit(2, 1);
  const Eigen::VectorXd vs[] = {e1, e1};
  CHECK(contract(t, vs) == doctest::Approx(4.0));
  const Eigen::VectorXd us[] = {e0, e1};
  CHECK(contract_except(t, us, 1)[0] == doctest::Approx(3.0));
}

TEST_CASE("dual maximizer attains the dual norm") {
  Eigen::VectorXd g(3);
  g << 1.0, -2.0, 0.5;
  for (double q : {1.0, 1.25, 1.5, 2.0}) {
    const Eigen::VectorXd v = dual_maximizer(g, q);
    CHECK(lp_norm(v, conjugate_exponent(q)) == doctest::Approx(1.0));
    CHECK(g.dot(v) == doctest::Approx(lp_norm(g, q)));
  }
  CHECK(std::isinf(conjugate_exponent(1.0)));
  CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
}

TEST_CASE("order one and order two are exact") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor v = random_tensor(1, 5, rng);
    OpNormOptions o;
    o.q = 1.5;
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.entries().data(), 5);
    CHECK(op_norm(v, o).value == doctest::Approx(lp_norm(x, 1.5)).epsilon(1e-12));
    const Eigen::MatrixXd a = oracle::random_symmetric(4, rng);
    CHECK(op_norm(Tensor::from_matrix(a)).value == doctest::Approx(oracle::sym_op2(a)).epsilon(1e-12));
  }
}

TEST_CASE("op norm properties") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const SymTensor t(random_tensor(3, 3, rng));
    OpNormOptions o;
    o.seed = static_cast<std::uint64_t>(trial);
    const OpNormResult r = op_norm(t, o);
    CHECK(r.value <= hs_norm(t) * (1.0 + 1e-12));
    // Lower-bound soundness against the witnesses.
    CHECK(std::abs(contract(t, r.witnesses)) == doctest::Approx(r.value).epsilon(1e-9));
    // Homogeneity.
    CHECK(op_norm(t.tensor().scaled(-2.5), o).value == doctest::Approx(2.5 * r.value).epsilon(1e-8));
    // Symmetric power iteration gives the same value for q = 2.
    CHECK(symmetric_power_norm(t) == doctest::Approx(r.value).epsilon(1e-6));
  }
}

TEST_CASE("diagonal tensor oracle") {
  // sum_i a_i x_i^3 on the unit sphere has op norm max |a_i|.
  Tensor t(3, 3);
  const double a[] = {0.5, -2.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    const int idx[] = {i, i, i};
    t.at(idx) = a[i];
  }
  CHECK(op_norm(t).value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(op_norm_oracle(t, 2.0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("q = 1 maximizes over sign vectors") {
  std::mt19937_64 rng(4);
  const Tensor t = random_tensor(2, 3, rng);
  double brute = 0.0;
  for (int u = 0; u < 8; ++u)
    for (int w = 0; w < 8; ++w) {
      Eigen::VectorXd x(3), y(3);
      for (int i = 0; i < 3; ++i) {
        x[i] = (u >> i) & 1 ? 1.0 : -1.0;
        y[i] = (w >> i) & 1 ? 1.0 : -1.0;
      }
      brute = std::max(brute, x.dot(t.as_matrix() * y));
    }
  OpNormOptions o;
  o.q = 1.0;
  CHECK(op_norm(t, o).value == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("op norm is deterministic in the seed") {
  std::mt19937_64 rng(5);
  const SymTensor t(random_tensor(4, 3, rng));
  OpNormOptions o;
  o.seed = 9;
  CHECK(op_norm(t, o).value == op_norm(t, o).value);
}

TEST_CASE("numeric helpers") {
  std::vector<double> xs(1000, 0.1);
  CHECK(pairwise_sum(xs) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.0) == "0");
  CHECK(substream_seed(1, 0) != substream_seed(1, 1));
  CHECK(kappa() == doctest::Approx(oracle::kKappa).epsilon(1e-15));
}
