// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hoc/finite_space.hpp"
#include "hoc/tensor.hpp"

namespace hoc {

struct HValues {
  double h = 0.0;
  double h_plus = 0.0;
  double h_minus = 0.0;
};

// Coordinate-replacement differences of f at configuration x.
// h: max over both x_i and x_i' of |f - T_i f| (support only).
// h_plus / h_minus: max over x_i' of (f(x) - T_i f)_+ / (f(x) - T_i f)_-.
HValues h_ops(const ValueTable& f, const FiniteProductSpace& space, std::size_t x, int i);

struct HVectors {
  Eigen::VectorXd h, h_plus, h_minus;
};
HVectors h_vectors(const ValueTable& f, const FiniteProductSpace& space, std::size_t x);

// |h f|(x), one value per configuration (Euclidean norm over i). Zero on
// configurations outside the support.
ValueTable h_norm_table(const ValueTable& f, const FiniteProductSpace& space);
ValueTable h_plus_norm_table(const ValueTable& f, const FiniteProductSpace& space);

// Order-j tensor of iterated differences at x; zero on repeated indices.
SymTensor h_tensor(const ValueTable& f, const FiniteProductSpace& space, int j, std::size_t x);

// Conditional standard deviations of f in each coordinate at x.
Eigen::VectorXd d_operator(const ValueTable& f, const FiniteProductSpace& space, std::size_t x);

struct DependenceProfile {
  Eigen::MatrixXd J;
  double beta_tilde = 1.0;
  double J_opnorm = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
};

DependenceProfile dependence_profile(const FiniteProductSpace& space);

struct DlsiConstants {
  double sigma2 = 0.0;
  double at_constant = 0.0;
};

DlsiConstants dlsi_constant(const DependenceProfile& profile);
DlsiConstants dlsi_constant(double alpha1, double alpha2);

// Sorted (value, probability) pairs; values closer than 1e-12 relative merge.
std::vector<std::pair<double, double>> exact_distribution(const ValueTable& f,
                                                          const FiniteProductSpace& space);
double exact_mean(const ValueTable& f, const FiniteProductSpace& space);
// E g over the space with pairwise summation.
double expectation(const ValueTable& g, const FiniteProductSpace& space);
// (E |f - Ef|^r)^(1/r).
double exact_moment(const ValueTable& f, const FiniteProductSpace& space, double r);
// (E |g|^r)^(1/r); r = infinity gives the max over the support.
double lr_norm(const ValueTable& g, const FiniteProductSpace& space, double r);

struct LogEntropy {};
struct PowerEntropy {
  double q = 2.0;
};
using PhiEntropy = std::variant<LogEntropy, PowerEntropy>;

// E Φ(g) - Φ(E g) with Φ(x) = x log x or x^q. g must be nonnegative.
double phi_entropy(const ValueTable& g, const FiniteProductSpace& space, const PhiEntropy& phi);
// Ent(f^2) computed without cancellation for nearly constant f.
double entropy_of_square(const ValueTable& f, const FiniteProductSpace& space);

// Ising measure on {-1,+1}^n: μ(x) ∝ exp(β (Σ c_ij x_i x_j + Σ h_i x_i)).
struct IsingEdge {
  int i, j;
  double coupling;
};
struct IsingSpec {
  int n = 0;
  std::vector<IsingEdge> edges;
  std::vector<double> fields;
  double beta = 1.0;
};
FiniteProductSpace ising(const IsingSpec& spec);

}  // namespace hoc
