// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hoc/calculus.hpp"
#include "hoc/errors.hpp"
#include "hoc/samplers.hpp"
#include "hoc/tensor.hpp"

using namespace hoc;

namespace {

// f(x, y) = x^2 y + 3 y^3
PolyFunction cubic() { return PolyFunction(2, {{{2, 1}, 1.0}, {{0, 3}, 3.0}}); }

}  // namespace

TEST_CASE("polynomial arithmetic and evaluation") {
  const PolyFunction f = cubic();
  const Eigen::Vector2d x(2.0, -1.0);
  CHECK(f.eval(x) == doctest::Approx(-4.0 - 3.0));
  CHECK(f.degree() == 3);
  const PolyFunction g = f * PolyFunction::coordinate(2, 0) - PolyFunction::constant(2, 1.0);
  CHECK(g.eval(x) == doctest::Approx(2.0 * -7.0 - 1.0));
  CHECK((f - f).terms().empty());
}

TEST_CASE("gradient and hessian by hand") {
  const PolyFunction f = cubic();
  const Eigen::Vector2d x(2.0, -1.0);
  const Eigen::VectorXd g = f.gradient(x);
  CHECK(g[0] == doctest::Approx(2 * 2.0 * -1.0));
  CHECK(g[1] == doctest::Approx(4.0 + 9.0));
  const Eigen::MatrixXd h = f.hessian(x);
  CHECK(h(0, 0) == doctest::Approx(-2.0));
  CHECK(h(0, 1) == doctest::Approx(4.0));
  CHECK(h(1, 1) == doctest::Approx(-18.0));
}

TEST_CASE("third derivative tensor of a cubic is constant") {
  const PolyFunction f = cubic();
  const SymTensor t = derivative_tensor(f, 3, Eigen::Vector2d(0.3, 0.7));
  const int a[] = {0, 0, 1}, b[] = {1, 1, 1}, c[] = {0, 0, 0};
  CHECK(t.at(a) == doctest::Approx(2.0));
  CHECK(t.at(b) == doctest::Approx(18.0));
  CHECK(t.at(c) == doctest::Approx(0.0));
  CHECK(hs_norm(derivative_tensor(f, 4, Eigen::Vector2d(1, 1))) == 0.0);
}

TEST_CASE("quadratic form derivatives") {
  Eigen::Matrix2d a;
  a << 1.0, 2.0, 2.0, -3.0;
  const PolyFunction f = PolyFunction::quadratic_form(a);
  const Eigen::MatrixXd h = derivative_tensor(f, 2, Eigen::Vector2d(5, 6)).tensor().as_matrix();
  CHECK((h - 2.0 * a).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("vec is column-major") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  const Eigen::VectorXd v = vec(a);
  CHECK(v[1] == 3.0);
  CHECK(mat(v, 2, 2) == a);
}

TEST_CASE("manifold membership") {
  CHECK_NOTHROW(check_on_manifold(ManifoldDescriptor::sphere(3), Eigen::Vector3d(0, 1, 0)));
  CHECK_THROWS_AS(check_on_manifold(ManifoldDescriptor::sphere(3), Eigen::Vector3d(0, 2, 0)), DomainError);
  CHECK_THROWS_AS(check_on_manifold(ManifoldDescriptor::stiefel(3, 2), Eigen::MatrixXd::Ones(3, 2)), DomainError);
}

TEST_CASE("sphere gradient and hessian of a linear function") {
  // f = <a, x>: intrinsic gradient P a, intrinsic hessian -<a, θ> P.
  const Eigen::Vector3d a(1.0, 2.0, -1.0);
  const PolyFunction f = PolyFunction::linear(a);
  Eigen::Vector3d th(1.0, 1.0, 1.0);
  th.normalize();
  const auto m = ManifoldDescriptor::sphere(3);
  const Eigen::Matrix3d p = Eigen::Matrix3d::Identity() - th * th.transpose();
  CHECK((intrinsic_gradient(m, f, th) - p * a).norm() < 1e-14);
  const Eigen::MatrixXd h = sphere_hessian(f, th).tensor().as_matrix();
  CHECK((h + a.dot(th) * p).norm() < 1e-14);
}

TEST_CASE("spherical partial derivatives") {
  // D_i differentiates the degree-0 extension f(x/|x|). For f = x_0 on the
  // sphere: D_0 D_1 f = -x_1 + 2 x_0^2 x_1 and D_1 D_0 f = 2 x_0^2 x_1.
  const PolyFunction f = PolyFunction::coordinate(3, 0);
  const Eigen::Vector3d th(0.6, 0.8, 0.0);
  const int ij[] = {0, 1};
  CHECK(spherical_partial(f, ij, th) == doctest::Approx(-0.8 + 2 * 0.36 * 0.8));
  const int ji[] = {1, 0};
  CHECK(spherical_partial(f, ji, th) == doctest::Approx(2 * 0.36 * 0.8));
  const int i1[] = {1};
  CHECK(spherical_partial(f, i1, th) == doctest::Approx(-0.6 * 0.8));
  CHECK(spherical_partial_tensor(f, 2, th).order() == 2);
}

TEST_CASE("great circle stays on the sphere") {
  const auto m = ManifoldDescriptor::sphere(3);
  const Eigen::MatrixXd x = Eigen::Vector3d(1, 0, 0);
  const Eigen::MatrixXd u = Eigen::Vector3d(0, 1, 0);
  const Eigen::MatrixXd y = manifold_curve(m, x, u, M_PI / 2);
  CHECK((y - Eigen::MatrixXd(Eigen::Vector3d(0, 1, 0))).norm() < 1e-14);
}

TEST_CASE("stiefel and grassmann curves stay on the manifold") {
  const SampleBatch s = sample_stiefel(5, 2, 3, 1);
  const auto ms = ManifoldDescriptor::stiefel(5, 2);
  const SampleBatch g = sample_grassmann(4, 2, 3, 2);
  const auto mg = ManifoldDescriptor::grassmann(4, 2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int r = 0; r < 3; ++r) {
    const Eigen::MatrixXd a = mat(s.data.row(r).transpose(), 5, 2);
    Eigen::MatrixXd z(5, 2);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = gauss(rng);
    CHECK_NOTHROW(check_on_manifold(ms, manifold_curve(ms, a, tangent_project(ms, a, z), 0.3)));
    const Eigen::MatrixXd p = mat(g.data.row(r).transpose(), 4, 4);
    Eigen::MatrixXd w(4, 4);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = gauss(rng);
    CHECK_NOTHROW(check_on_manifold(mg, manifold_curve(mg, p, tangent_project(mg, p, w), 0.3)));
  }
}
