// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hoc/tensor.hpp"

namespace hoc {

using Exponents = std::vector<int>;

// Real polynomial in nvars variables, kept in merged form (one coefficient
// per exponent vector, zero coefficients dropped).
class PolyFunction {
 public:
  explicit PolyFunction(int nvars = 0);
  PolyFunction(int nvars, const std::vector<std::pair<Exponents, double>>& monomials);

  static PolyFunction constant(int nvars, double c);
  static PolyFunction coordinate(int nvars, int i);
  static PolyFunction linear(const Eigen::VectorXd& a);
  // x^T A x
  static PolyFunction quadratic_form(const Eigen::MatrixXd& a);

  int nvars() const { return nvars_; }
  int degree() const;
  const std::map<Exponents, double>& terms() const { return terms_; }

  double eval(std::span<const double> x) const;
  double eval(const Eigen::VectorXd& x) const;

  PolyFunction partial(int i) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  PolyFunction operator+(const PolyFunction& o) const;
  PolyFunction operator-(const PolyFunction& o) const;
  PolyFunction operator*(const PolyFunction& o) const;
  PolyFunction operator*(double a) const;

 private:
  void add_term(const Exponents& e, double c);
  int nvars_;
  std::map<Exponents, double> terms_;
};

// Exact j-th derivative tensor of f at x.
SymTensor derivative_tensor(const PolyFunction& f, int j, const Eigen::VectorXd& x);

enum class ManifoldKind { Euclidean, Sphere, LpSphere, Stiefel, Grassmann };

struct ManifoldDescriptor {
  ManifoldKind kind = ManifoldKind::Euclidean;
  int n = 1;
  int k = 0;
  double p = 2.0;

  static ManifoldDescriptor euclidean(int n);
  static ManifoldDescriptor sphere(int n);
  static ManifoldDescriptor lp_sphere(int n, double p);
  static ManifoldDescriptor stiefel(int n, int k);
  static ManifoldDescriptor grassmann(int n, int k);

  // Shape of a point: n x 1 for vector manifolds, n x k (Stiefel), n x n (Grassmann).
  int rows() const { return n; }
  int cols() const;
  // Number of polynomial variables (entries of the vectorized point).
  int ambient_dim() const { return rows() * cols(); }
};

constexpr double kOnManifoldTol = 1e-8;

// Throws DomainError if `point` is not on the manifold to 1e-8.
void check_on_manifold(const ManifoldDescriptor& m, const Eigen::MatrixXd& point);

// Column-major vectorization and its inverse.
Eigen::VectorXd vec(const Eigen::MatrixXd& a);
Eigen::MatrixXd mat(const Eigen::VectorXd& v, int rows, int cols);

Eigen::MatrixXd tangent_project(const ManifoldDescriptor& m, const Eigen::MatrixXd& point,
                                const Eigen::MatrixXd& ambient);

// Euclidean gradient of f at vec(point), reshaped like the point.
Eigen::MatrixXd ambient_gradient(const ManifoldDescriptor& m, const PolyFunction& f,
                                 const Eigen::MatrixXd& point);
Eigen::MatrixXd intrinsic_gradient(const ManifoldDescriptor& m, const PolyFunction& f,
                                   const Eigen::MatrixXd& point);

// P B P with B = f''(θ) - <θ, ∇f(θ)> I and P = I - θθ^T.
SymTensor sphere_hessian(const PolyFunction& f, const Eigen::VectorXd& theta);

// Iterated spherical partial derivative D_{i1} ... D_{ij} f at θ
// (D_{ij} is applied innermost).
double spherical_partial(const PolyFunction& f, std::span<const int> indices,
                         const Eigen::VectorXd& theta);

// All entries D_{i1..ij} f(θ). Not symmetric in general, so a plain Tensor.
Tensor spherical_partial_tensor(const PolyFunction& f, int j, const Eigen::VectorXd& theta);

// Curve through `point` with initial velocity `tangent`, evaluated at t.
// Sphere: great circle. LpSphere: radial normalization. Stiefel: polar
// retraction. Grassmann: top-k eigenprojector of P + tS.
Eigen::MatrixXd manifold_curve(const ManifoldDescriptor& m, const Eigen::MatrixXd& point,
                               const Eigen::MatrixXd& tangent, double t);

}  // namespace hoc
