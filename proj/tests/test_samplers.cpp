// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"
#include "hoc/samplers.hpp"
#include "hoc/tensor.hpp"

using namespace hoc;

namespace {

double column_mean(const RowMatrix& m, int c, double (*g)(double)) {
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) v[r] = g(m(r, c));
  return pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("same seed gives the same bits") {
  const SampleBatch a = sample_gaussian(3, 5000, 7), b = sample_gaussian(3, 5000, 7);
  CHECK(a.data == b.data);
  CHECK(sample_gaussian(3, 10, 8).data != a.data.topRows(10));
  // A prefix of a longer run matches the shorter run.
  CHECK(sample_gaussian(3, 100, 7).data == a.data.topRows(100));
}

TEST_CASE("gaussian moments") {
  const SampleBatch s = sample_gaussian(2, 200000, 1);
  CHECK(std::abs(column_mean(s.data, 0, [](double x) { return x; })) < 0.01);
  CHECK(column_mean(s.data, 1, [](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma sampler mean") {
  std::mt19937_64 rng(5);
  for (double shape : {0.3, 1.0, 4.5}) {
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += sample_gamma(shape, rng);
    CHECK(s / n == doctest::Approx(shape).epsilon(0.03));
  }
}

TEST_CASE("sphere and cone points lie on their surfaces") {
  const SampleBatch s = sample_sphere(4, 100, 2);
  for (Eigen::Index r = 0; r < 100; ++r) CHECK(s.data.row(r).norm() == doctest::Approx(1.0).epsilon(1e-14));
  const SampleBatch c = sample_cone_lp(3.0, 4, 100, 3);
  for (Eigen::Index r = 0; r < 100; ++r)
    CHECK(lp_norm(c.data.row(r).transpose(), 3.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("alias table frequencies") {
  const AliasTable t({1.0, 3.0, 0.0, 6.0});
  std::mt19937_64 rng(6);
  std::vector<int> counts(4);
  for (int i = 0; i < 100000; ++i) ++counts[t.draw(rng)];
  CHECK(counts[2] == 0);
  CHECK(counts[3] / 1e5 == doctest::Approx(0.6).epsilon(0.02));
  CHECK(counts[0] / 1e5 == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("finite sampler draws configuration indices") {
  const FiniteProductSpace sp = FiniteProductSpace::product({{0.0, 1.0}}, {{0.25, 0.75}});
  const SampleBatch s = sample_finite(sp, 40000, 4);
  CHECK(s.data.cols() == 1);
  const double mean = column_mean(s.data, 0, [](double x) { return x; });
  CHECK(mean == doctest::Approx(0.75).epsilon(0.02));
  const RowMatrix lab = finite_labels(sp, s);
  CHECK(lab.cols() == 1);
}

TEST_CASE("binary round trip") {
  const SampleBatch s = sample_pgen(3.0, 3, 17, 9);
  std::stringstream buf;
  write_binary(s, buf);
  CHECK(buf.str().substr(0, 8) == "CLABSAMP");
  CHECK(read_binary(buf) == s.data);
  std::stringstream bad("NOTMAGIC");
  CHECK_THROWS(read_binary(bad));
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(sample_stiefel(3, 3, 1, 0), DomainError);
  CHECK_THROWS_AS(sample_pgen(0.5, 2, 1, 0), DomainError);
}
