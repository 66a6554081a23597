// SPDX-License-Identifier: Apache-2.0
#include "hoc/samplers.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"
#include "hoc/tensor.hpp"

namespace hoc {

std::string MeasureDescriptor::tag() const {
  switch (kind) {
    case MeasureKind::Gaussian: return "gaussian";
    case MeasureKind::PGeneralized: return "pgen";
    case MeasureKind::Sphere: return "sphere";
    case MeasureKind::ConeLp: return "cone_lp";
    case MeasureKind::Stiefel: return "stiefel";
    case MeasureKind::Grassmann: return "grassmann";
    case MeasureKind::Finite: return "finite";
  }
  return "unknown";
}

int MeasureDescriptor::ambient_dim() const {
  switch (kind) {
    case MeasureKind::Stiefel: return n * k;
    case MeasureKind::Grassmann: return n * n;
    case MeasureKind::Finite: return 1;
    default: return n;
  }
}

namespace {

double uniform_open(std::mt19937_64& rng) {
  double u;
  do {
    u = std::generate_canonical<double, 53>(rng);
  } while (u <= 0.0);
  return u;
}

template <class RowFn>
SampleBatch generate(const MeasureDescriptor& d, std::size_t count, std::uint64_t seed, RowFn&& row_fn) {
  if (count < 1) throw DomainError("count must be >= 1");
  SampleBatch b;
  b.seed = seed;
  b.descriptor = d;
  b.data.resize(static_cast<Eigen::Index>(count), d.ambient_dim());
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  for (std::size_t c = 0; c < chunks; ++c) {
    std::mt19937_64 rng(substream_seed(seed, c));
    const std::size_t end = std::min(count, (c + 1) * kSampleChunk);
    for (std::size_t r = c * kSampleChunk; r < end; ++r) row_fn(b.data.row(static_cast<Eigen::Index>(r)), rng);
  }
  return b;
}

double pgen_scalar(double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  const double g = sample_gamma(1.0 / p, rng);
  const double r = std::pow(p * g, 1.0 / p);
  return coin(rng) ? r : -r;
}

// G (G^T G)^{-1/2} for an n x k Gaussian G; resamples once if singular.
Eigen::MatrixXd haar_stiefel(int n, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::MatrixXd g(n, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.transpose() * g);
    const Eigen::VectorXd ev = es.eigenvalues();
    if (!(ev.minCoeff() > 1e-12 * ev.maxCoeff())) continue;
    const Eigen::VectorXd inv_sqrt = ev.cwiseSqrt().cwiseInverse();
    return g * (es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose());
  }
  throw DomainError("numerically singular Gram matrix twice in a row");
}

}  // namespace

double sample_gamma(double shape, std::mt19937_64& rng) {
  if (!(shape > 0.0)) throw DomainError("gamma shape must be positive");
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(uniform_open(rng), 1.0 / shape);
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = gauss(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

SampleBatch sample_gaussian(int n, std::size_t count, std::uint64_t seed) {
  if (n < 1) throw DomainError("n must be >= 1");
  return generate({MeasureKind::Gaussian, n, 0, 2.0}, count, seed, [n](auto row, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < n; ++i) row[i] = gauss(rng);
  });
}

SampleBatch sample_pgen(double p, int n, std::size_t count, std::uint64_t seed) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(p >= 2.0) || std::isinf(p)) throw DomainError("p must be finite and >= 2");
  return generate({MeasureKind::PGeneralized, n, 0, p}, count, seed, [n, p](auto row, std::mt19937_64& rng) {
    for (int i = 0; i < n; ++i) row[i] = pgen_scalar(p, rng);
  });
}

SampleBatch sample_sphere(int n, std::size_t count, std::uint64_t seed) {
  if (n < 2) throw DomainError("sphere needs n >= 2");
  return generate({MeasureKind::Sphere, n, 0, 2.0}, count, seed, [n](auto row, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd z(n);
    do {
      for (int i = 0; i < n; ++i) z[i] = gauss(rng);
    } while (z.norm() == 0.0);
    z /= z.norm();
    for (int i = 0; i < n; ++i) row[i] = z[i];
  });
}

SampleBatch sample_cone_lp(double p, int n, std::size_t count, std::uint64_t seed) {
  if (n < 2) throw DomainError("cone measure needs n >= 2");
  if (!(p >= 2.0) || std::isinf(p)) throw DomainError("p must be finite and >= 2");
  return generate({MeasureKind::ConeLp, n, 0, p}, count, seed, [n, p](auto row, std::mt19937_64& rng) {
    Eigen::VectorXd z(n);
    do {
      for (int i = 0; i < n; ++i) z[i] = pgen_scalar(p, rng);
    } while (z.cwiseAbs().maxCoeff() == 0.0);
    z /= lp_norm(z, p);
    for (int i = 0; i < n; ++i) row[i] = z[i];
  });
}

SampleBatch sample_stiefel(int n, int k, std::size_t count, std::uint64_t seed) {
  if (k < 1 || k >= n) throw DomainError("Stiefel sampling needs 1 <= k < n");
  return generate({MeasureKind::Stiefel, n, k, 2.0}, count, seed, [n, k](auto row, std::mt19937_64& rng) {
    const Eigen::MatrixXd a = haar_stiefel(n, k, rng);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) row[j * n + i] = a(i, j);
  });
}

SampleBatch sample_grassmann(int n, int k, std::size_t count, std::uint64_t seed) {
  if (k < 1 || k >= n) throw DomainError("Grassmann sampling needs 1 <= k < n");
  return generate({MeasureKind::Grassmann, n, k, 2.0}, count, seed, [n, k](auto row, std::mt19937_64& rng) {
    const Eigen::MatrixXd a = haar_stiefel(n, k, rng);
    Eigen::MatrixXd pm = a * a.transpose();
    pm = (0.5 * (pm + pm.transpose())).eval();
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) row[j * n + i] = pm(i, j);
  });
}

AliasTable::AliasTable(const std::vector<double>& w) : prob_(w.size()), alias_(w.size()) {
  const std::size_t m = w.size();
  if (m == 0) throw DomainError("alias table needs at least one weight");
  const double total = pairwise_sum(w);
  if (!(total > 0.0)) throw DomainError("alias table weights must have positive sum");
  std::vector<double> scaled(m);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < m; ++i) {
    scaled[i] = w[i] * static_cast<double>(m) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::size_t i : small) {
    // Leftovers from rounding; they carry full weight of their own column
    // unless they are true zeros.
    prob_[i] = w[i] > 0.0 ? 1.0 : 0.0;
    alias_[i] = i;
  }
}

std::size_t AliasTable::draw(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::size_t> col(0, prob_.size() - 1);
  const std::size_t i = col(rng);
  return std::generate_canonical<double, 53>(rng) < prob_[i] ? i : alias_[i];
}

SampleBatch sample_finite(const FiniteProductSpace& space, std::size_t count, std::uint64_t seed) {
  if (space.size() > FiniteProductSpace::kMaxConfigs) throw CostGuardError("table exceeds 2^22 configurations");
  const AliasTable table(space.joint());
  return generate({MeasureKind::Finite, space.n(), 0, 2.0}, count, seed, [&table](auto row, std::mt19937_64& rng) {
    row[0] = static_cast<double>(table.draw(rng));
  });
}

RowMatrix finite_labels(const FiniteProductSpace& space, const SampleBatch& batch) {
  if (batch.data.cols() != 1) throw ShapeError("expected a batch of configuration indices");
  RowMatrix x(batch.data.rows(), space.n());
  for (Eigen::Index r = 0; r < batch.data.rows(); ++r) {
    const auto c = static_cast<std::size_t>(batch.data(r, 0));
    if (c >= space.size()) throw ShapeError("configuration index out of range");
    for (int i = 0; i < space.n(); ++i) x(r, i) = space.label(c, i);
  }
  return x;
}

SampleBatch sample(const MeasureDescriptor& d, std::size_t count, std::uint64_t seed) {
  switch (d.kind) {
    case MeasureKind::Gaussian: return sample_gaussian(d.n, count, seed);
    case MeasureKind::PGeneralized: return sample_pgen(d.p, d.n, count, seed);
    case MeasureKind::Sphere: return sample_sphere(d.n, count, seed);
    case MeasureKind::ConeLp: return sample_cone_lp(d.p, d.n, count, seed);
    case MeasureKind::Stiefel: return sample_stiefel(d.n, d.k, count, seed);
    case MeasureKind::Grassmann: return sample_grassmann(d.n, d.k, count, seed);
    case MeasureKind::Finite: break;
  }
  throw DomainError("finite measures need a FiniteProductSpace");
}

void write_csv(const SampleBatch& batch, std::ostream& out) {
  for (Eigen::Index r = 0; r < batch.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < batch.data.cols(); ++c) {
      if (c) out << ',';
      out << format_double(batch.data(r, c));
    }
    out << '\n';
  }
}

namespace {
constexpr char kMagic[8] = {'C', 'L', 'A', 'B', 'S', 'A', 'M', 'P'};
}

void write_binary(const SampleBatch& batch, std::ostream& out) {
  const std::uint64_t rows = static_cast<std::uint64_t>(batch.data.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(batch.data.cols());
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  out.write(reinterpret_cast<const char*>(batch.data.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
}

RowMatrix read_binary(std::istream& in) {
  char magic[8];
  std::uint64_t rows = 0, cols = 0;
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ShapeError("bad sample file header");
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in) throw ShapeError("truncated sample file");
  RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!in) throw ShapeError("truncated sample file");
  return m;
}

}  // namespace hoc
