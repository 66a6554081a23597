// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "hoc/finite_space.hpp"

namespace hoc {

enum class MeasureKind { Gaussian, PGeneralized, Sphere, ConeLp, Stiefel, Grassmann, Finite };

struct MeasureDescriptor {
  MeasureKind kind = MeasureKind::Gaussian;
  int n = 1;
  int k = 0;
  double p = 2.0;

  std::string tag() const;
  // Columns of one sample row.
  int ambient_dim() const;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SampleBatch {
  RowMatrix data;
  std::uint64_t seed = 0;
  MeasureDescriptor descriptor;
};

// Rows are generated in fixed chunks; chunk c uses its own engine seeded
// from (seed, c), so output depends only on (descriptor, count, seed).
constexpr std::size_t kSampleChunk = 4096;

SampleBatch sample_gaussian(int n, std::size_t count, std::uint64_t seed);
// Density proportional to exp(-|x|^p / p), i.i.d. coordinates.
SampleBatch sample_pgen(double p, int n, std::size_t count, std::uint64_t seed);
SampleBatch sample_sphere(int n, std::size_t count, std::uint64_t seed);
// Cone measure on the ℓ_p sphere: Z / |Z|_p with Z p-generalized Gaussian.
SampleBatch sample_cone_lp(double p, int n, std::size_t count, std::uint64_t seed);
// Rows are vec(A) (column-major) with A Haar on the Stiefel manifold.
SampleBatch sample_stiefel(int n, int k, std::size_t count, std::uint64_t seed);
// Rows are vec(P) with P the projection onto a uniform random k-plane.
SampleBatch sample_grassmann(int n, int k, std::size_t count, std::uint64_t seed);
// One column holding flat configuration indices.
SampleBatch sample_finite(const FiniteProductSpace& space, std::size_t count, std::uint64_t seed);
// Label matrix (count x n) for a batch produced by sample_finite.
RowMatrix finite_labels(const FiniteProductSpace& space, const SampleBatch& batch);

SampleBatch sample(const MeasureDescriptor& d, std::size_t count, std::uint64_t seed);

// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 via G(a+1) U^(1/a).
double sample_gamma(double shape, std::mt19937_64& rng);

// Vose alias table over a discrete distribution.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights);
  std::size_t draw(std::mt19937_64& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

void write_csv(const SampleBatch& batch, std::ostream& out);
// "CLABSAMP", uint64 rows, uint64 cols, then float64 values row-major
// (host byte order).
void write_binary(const SampleBatch& batch, std::ostream& out);
RowMatrix read_binary(std::istream& in);

}  // namespace hoc
