// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hoc/bounds.hpp"
#include "hoc/calculus.hpp"
#include "hoc/discrete.hpp"
#include "hoc/finite_space.hpp"
#include "hoc/samplers.hpp"

namespace hoc {

struct EmpiricalTail {
  double fraction = 0.0;
  double upper = 1.0;
};

// Fraction of |values| >= t and its exact Clopper-Pearson upper bound at
// level 1 - delta.
EmpiricalTail empirical_tail(std::span<const double> values, double t, double delta);
double clopper_pearson_upper(std::size_t successes, std::size_t trials, double delta);

enum class VerifyMode { MonteCarlo, Exhaustive };

struct VerificationReport {
  std::vector<double> grid;
  std::vector<double> empirical_tail;
  std::vector<double> empirical_upper_confidence;
  std::vector<double> theoretical;
  std::vector<bool> verdicts;
  bool pass = true;
  std::size_t sample_count = 0;
  double delta = 0.0;
  VerifyMode mode = VerifyMode::MonteCarlo;
};

using SampleFunction = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;
using BoundCurve = std::function<double(double)>;

// Monte Carlo: f is evaluated on every row and should already be centered.
// delta is split over the grid (Bonferroni).
VerificationReport verify_tail(const SampleBatch& batch, const SampleFunction& f, const Setting& s,
                               const LevelCoefficients& K, const std::vector<double>& grid,
                               double delta = 0.01);
// Exhaustive: exact law of f - Ef on the space; delta is ignored.
VerificationReport verify_tail(const FiniteProductSpace& space, const ValueTable& f, const Setting& s,
                               const LevelCoefficients& K, const std::vector<double>& grid);

// Same comparison against an arbitrary bound curve (e.g. hw_bound).
VerificationReport verify_tail_curve(std::span<const double> centered_values, const BoundCurve& bound,
                                     const std::vector<double>& grid, double delta = 0.01);
VerificationReport verify_tail_curve(const FiniteProductSpace& space, const ValueTable& f,
                                     const BoundCurve& bound, const std::vector<double>& grid);

// Evaluate f on every row of a batch.
std::vector<double> evaluate_rows(const SampleBatch& batch, const SampleFunction& f);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  // mean + 3 standard errors
  double inflated = 0.0;
};
McEstimate mc_estimate(std::span<const double> values);

struct MomentRow {
  double r = 0.0;
  double moment = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct MomentReport {
  std::vector<MomentRow> rows;
  bool pass = true;
  VerifyMode mode = VerifyMode::Exhaustive;
};

// ||f - Ef||_r against moment_growth_bound(s, K, r).
MomentReport verify_moment_recursion(const FiniteProductSpace& space, const ValueTable& f, const Setting& s,
                                     const LevelCoefficients& K, const std::vector<double>& r_list);
MomentReport verify_moment_recursion(const SampleBatch& batch, const SampleFunction& f, const Setting& s,
                                     const LevelCoefficients& K, const std::vector<double>& r_list);

// ||f - Ef||_r against L σ r^{1/p} || |h f| ||_r (one level, exact).
MomentReport verify_first_order_moments(const FiniteProductSpace& space, const ValueTable& f, const Setting& s,
                                        const std::vector<double>& r_list);

struct ExpMomentResult {
  double integral = 0.0;
  bool pass = false;
};

// E exp(coefficient |f - Ef|^exponent) by enumeration; pass iff <= 2.
ExpMomentResult verify_exp_moment(const FiniteProductSpace& space, const ValueTable& f,
                                  const ExpMomentCertificate& cert);
// E exp(coefficient |g|^exponent) without centering.
double exp_moment_integral(const FiniteProductSpace& space, const ValueTable& g, double coefficient,
                           double exponent);

struct DlsiSearchResult {
  double max_ratio = 0.0;
  ValueTable best_function;
  bool pass = false;
};

// Ent(f^2) / (2 E|d f|^2), f over the support.
double dlsi_ratio(const FiniteProductSpace& space, const ValueTable& f);

// Searches for functions with a large ratio; the result lower-bounds the
// optimal constant. pass iff the best ratio <= sigma2_claimed.
DlsiSearchResult verify_dlsi(const FiniteProductSpace& space, double sigma2_claimed, int search_budget = 8,
                             std::uint64_t seed = 0);

struct FiniteDifferenceResult {
  double gradient_error = 0.0;
  double hessian_error = 0.0;  // sphere only
  bool contraction_holds = true;
  int points = 0;
};

// Central differences along in-manifold curves against intrinsic
// derivatives, at each point in `points` (shaped like manifold points).
FiniteDifferenceResult finite_difference_suite(const PolyFunction& f, const ManifoldDescriptor& m,
                                               const std::vector<Eigen::MatrixXd>& points, double h = 1e-4,
                                               std::uint64_t seed = 0, int directions = 3);

}  // namespace hoc
