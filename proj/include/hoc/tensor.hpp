// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hoc {

// Dense order-j tensor over n coordinates, row-major (first index slowest).
class Tensor {
 public:
  Tensor() = default;
  Tensor(int order, int dim);
  Tensor(int order, int dim, std::vector<double> entries);

  // Order-1 / order-2 conveniences.
  static Tensor from_vector(const Eigen::VectorXd& v);
  static Tensor from_matrix(const Eigen::MatrixXd& m);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<double>& entries() const { return entries_; }

  double operator[](std::size_t flat) const { return entries_[flat]; }
  double& operator[](std::size_t flat) { return entries_[flat]; }
  double at(std::span<const int> idx) const { return entries_[flat_index(idx)]; }
  double& at(std::span<const int> idx) { return entries_[flat_index(idx)]; }

  std::size_t flat_index(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;

  // Only valid for order 2.
  Eigen::MatrixXd as_matrix() const;

  bool is_symmetric(double tol = 0.0) const;
  Tensor scaled(double a) const;

 private:
  int order_ = 0;
  int dim_ = 0;
  std::vector<double> entries_;
};

// Tensor invariant under index permutations. The constructor symmetrizes
// by averaging each entry over its permutation orbit.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(int order, int dim);
  SymTensor(int order, int dim, std::vector<double> entries);
  explicit SymTensor(const Tensor& t);

  // Throws DomainError unless `t` is already symmetric to `tol`.
  static SymTensor checked(const Tensor& t, double tol = 1e-12);

  int order() const { return t_.order(); }
  int dim() const { return t_.dim(); }
  const std::vector<double>& entries() const { return t_.entries(); }
  double operator[](std::size_t flat) const { return t_[flat]; }
  double at(std::span<const int> idx) const { return t_.at(idx); }
  const Tensor& tensor() const { return t_; }
  operator const Tensor&() const { return t_; }

 private:
  struct Trusted {};
  SymTensor(Tensor t, Trusted) : t_(std::move(t)) {}
  Tensor t_;
};

Tensor symmetrize(const Tensor& t);

double hs_norm(const Tensor& t);

// Full contraction against one vector per index.
double contract(const Tensor& t, std::span<const Eigen::VectorXd> vs);

// Contraction against every vector except the one at `free_index`; the
// result is the linear form left in that slot.
Eigen::VectorXd contract_except(const Tensor& t,
                                std::span<const Eigen::VectorXd> vs,
                                int free_index);

// Conjugate exponent of q in [1,2]; infinity for q = 1.
double conjugate_exponent(double q);
double lp_norm(const Eigen::VectorXd& v, double p);

// Unit-ℓ_p vector maximizing <g, v>, where p is conjugate to q.
// The attained value is |g|_q. Sign ties go to +1.
Eigen::VectorXd dual_maximizer(const Eigen::VectorXd& g, double q);

struct OpNormOptions {
  double q = 2.0;
  int restarts = 20;
  double tol = 1e-10;
  int max_sweeps = 1000;
  std::uint64_t seed = 0;
};

struct OpNormResult {
  double value = 0.0;
  std::vector<Eigen::VectorXd> witnesses;
  bool converged = true;
  int restarts_used = 0;
};

// Sup of <T, v^1 ... v^j> over unit-ℓ_p vectors. Exact for order 1 and for
// order 2 with q = 2; otherwise a lower bound from alternating maximization.
OpNormResult op_norm(const Tensor& t, const OpNormOptions& opts = {});

// Alternating maximization from given starting vectors. Used for polishing.
OpNormResult op_norm_from(const Tensor& t, std::vector<Eigen::VectorXd> start,
                          double q, double tol = 1e-12, int max_sweeps = 1000);

// Grid search oracle for tiny tensors (dim <= 4, order <= 3).
double op_norm_oracle(const Tensor& t, double q, int grid_per_angle = 96);

// Symmetric power iteration v <- T(v,..,v,.) with the same ℓ_2 constraint.
// Reference for symmetric tensors with q = 2.
double symmetric_power_norm(const SymTensor& t, int restarts = 20,
                            std::uint64_t seed = 0);

}  // namespace hoc
