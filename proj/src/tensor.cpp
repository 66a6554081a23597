// SPDX-License-Identifier: Apache-2.0
#include "hoc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"

namespace hoc {

namespace {

std::size_t checked_size(int order, int dim) {
  if (order < 1 || dim < 1) throw DomainError("tensor order and dim must be >= 1");
  std::size_t n = 1;
  for (int k = 0; k < order; ++k) {
    if (n > (std::size_t{1} << 40) / static_cast<std::size_t>(dim))
      throw CostGuardError("tensor too large");
    n *= static_cast<std::size_t>(dim);
  }
  return n;
}

}  // namespace

Tensor::Tensor(int order, int dim)
    : order_(order), dim_(dim), entries_(checked_size(order, dim), 0.0) {}

Tensor::Tensor(int order, int dim, std::vector<double> entries)
    : order_(order), dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != checked_size(order, dim))
    throw ShapeError("tensor entry count does not match dim^order");
}

Tensor Tensor::from_vector(const Eigen::VectorXd& v) {
  return Tensor(1, static_cast<int>(v.size()),
                std::vector<double>(v.data(), v.data() + v.size()));
}

Tensor Tensor::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ShapeError("matrix must be square");
  const int n = static_cast<int>(m.rows());
  Tensor t(2, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.entries_[static_cast<std::size_t>(i) * n + j] = m(i, j);
  return t;
}

std::size_t Tensor::flat_index(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != order_) throw ShapeError("index length != order");
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw ShapeError("index out of range");
    f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return f;
}

void Tensor::unflatten(std::size_t flat, std::span<int> idx) const {
  for (int k = order_ - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
}

Eigen::MatrixXd Tensor::as_matrix() const {
  if (order_ != 2) throw ShapeError("as_matrix needs an order-2 tensor");
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = entries_[static_cast<std::size_t>(i) * dim_ + j];
  return m;
}

bool Tensor::is_symmetric(double tol) const {
  std::vector<int> idx(order_), sorted(order_);
  for (std::size_t f = 0; f < entries_.size(); ++f) {
    unflatten(f, idx);
    sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    const double a = entries_[f];
    const double b = entries_[flat_index(sorted)];
    if (std::abs(a - b) > tol * std::max({1.0, std::abs(a), std::abs(b)})) return false;
  }
  return true;
}

Tensor Tensor::scaled(double a) const {
  Tensor t = *this;
  for (double& e : t.entries_) e *= a;
  return t;
}

Tensor symmetrize(const Tensor& t) {
  // Average over the orbit of each index multiset. Uniform orbit averaging
  // equals averaging over all j! permutations.
  std::map<std::vector<int>, std::pair<double, int>> orbit;
  std::vector<int> idx(t.order());
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflatten(f, idx);
    std::sort(idx.begin(), idx.end());
    auto& slot = orbit[idx];
    slot.first += t[f];
    slot.second += 1;
  }
  Tensor out(t.order(), t.dim());
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflatten(f, idx);
    std::sort(idx.begin(), idx.end());
    const auto& slot = orbit[idx];
    out[f] = slot.first / slot.second;
  }
  return out;
}

SymTensor::SymTensor(int order, int dim) : t_(order, dim) {}

SymTensor::SymTensor(int order, int dim, std::vector<double> entries)
    : t_(symmetrize(Tensor(order, dim, std::move(entries)))) {}

SymTensor::SymTensor(const Tensor& t) : t_(symmetrize(t)) {}

SymTensor SymTensor::checked(const Tensor& t, double tol) {
  if (!t.is_symmetric(tol)) throw DomainError("tensor is not symmetric");
  return SymTensor(t, Trusted{});
}

double hs_norm(const Tensor& t) {
  std::vector<double> sq(t.entries().size());
  std::transform(t.entries().begin(), t.entries().end(), sq.begin(),
                 [](double x) { return x * x; });
  return std::sqrt(pairwise_sum(sq));
}

namespace {

void check_vectors(const Tensor& t, std::span<const Eigen::VectorXd> vs) {
  if (static_cast<int>(vs.size()) != t.order())
    throw ShapeError("need one vector per tensor index");
  for (const auto& v : vs)
    if (v.size() != t.dim()) throw ShapeError("vector length != tensor dim");
}

}  // namespace

double contract(const Tensor& t, std::span<const Eigen::VectorXd> vs) {
  check_vectors(t, vs);
  // Peel off the last index repeatedly: entries are row-major, so the last
  // index is contiguous.
  const int n = t.dim();
  std::vector<double> cur = t.entries();
  for (int k = t.order() - 1; k >= 0; --k) {
    const Eigen::VectorXd& v = vs[k];
    std::vector<double> next(cur.size() / n);
    for (std::size_t r = 0; r < next.size(); ++r) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += cur[r * n + i] * v[i];
      next[r] = s;
    }
    cur = std::move(next);
  }
  return cur[0];
}

Eigen::VectorXd contract_except(const Tensor& t, std::span<const Eigen::VectorXd> vs,
                                int free_index) {
  check_vectors(t, vs);
  if (free_index < 0 || free_index >= t.order()) throw ShapeError("free index out of range");
  const int n = t.dim();
  const int j = t.order();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  std::vector<int> idx(j);
  for (std::size_t f = 0; f < t.size(); ++f) {
    const double e = t[f];
    if (e == 0.0) continue;
    t.unflatten(f, idx);
    double w = e;
    for (int k = 0; k < j; ++k)
      if (k != free_index) w *= vs[k][idx[k]];
    g[idx[free_index]] += w;
  }
  return g;
}

double conjugate_exponent(double q) {
  if (!(q >= 1.0 && q <= 2.0)) throw DomainError("q must lie in [1,2]");
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  return q / (q - 1.0);
}

double lp_norm(const Eigen::VectorXd& v, double p) {
  if (std::isinf(p)) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (p == 2.0) return v.norm();
  if (p == 1.0) return v.cwiseAbs().sum();
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
  return std::pow(s, 1.0 / p);
}

Eigen::VectorXd dual_maximizer(const Eigen::VectorXd& g, double q) {
  const double p = conjugate_exponent(q);
  const Eigen::Index n = g.size();
  Eigen::VectorXd v(n);
  if (q == 1.0) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = g[i] >= 0.0 ? 1.0 : -1.0;
    return v;
  }
  const double gn = lp_norm(g, q);
  if (gn == 0.0) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  if (q == 2.0) return g / gn;
  // Scale first so the powers neither overflow nor underflow.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(g[i]) / gn;
    v[i] = std::copysign(std::pow(a, q - 1.0), g[i]);
  }
  return v / lp_norm(v, p);
}

namespace {

Eigen::VectorXd random_start(int n, double q, std::mt19937_64& rng) {
  Eigen::VectorXd v(n);
  if (q == 1.0) {
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < n; ++i) v[i] = coin(rng) ? 1.0 : -1.0;
    return v;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  do {
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  } while (v.norm() == 0.0);
  return v / lp_norm(v, conjugate_exponent(q));
}

OpNormResult exact_order_one(const Tensor& t, double q) {
  Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(t.entries().data(), t.dim());
  OpNormResult r;
  r.witnesses = {dual_maximizer(g, q)};
  r.value = std::max(0.0, g.dot(r.witnesses[0]));
  r.restarts_used = 0;
  return r;
}

OpNormResult exact_matrix(const Tensor& t) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.as_matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  OpNormResult r;
  Eigen::VectorXd u = svd.matrixU().col(0);
  Eigen::VectorXd v = svd.matrixV().col(0);
  r.witnesses = {u, v};
  r.value = contract(t, r.witnesses);
  if (r.value < 0.0) {
    r.witnesses[0] = -u;
    r.value = -r.value;
  }
  r.restarts_used = 0;
  return r;
}

}  // namespace

OpNormResult op_norm_from(const Tensor& t, std::vector<Eigen::VectorXd> vs, double q,
                          double tol, int max_sweeps) {
  const int j = t.order();
  OpNormResult r;
  r.converged = false;
  double prev = -std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double val = 0.0;
    for (int k = 0; k < j; ++k) {
      Eigen::VectorXd g = contract_except(t, vs, k);
      if (g.cwiseAbs().maxCoeff() == 0.0) continue;
      vs[k] = dual_maximizer(g, q);
      val = g.dot(vs[k]);
    }
    if (val - prev <= tol * std::max(std::abs(val), std::numeric_limits<double>::min())) {
      r.converged = true;
      break;
    }
    prev = val;
  }
  r.value = contract(t, vs);
  if (r.value < 0.0) {
    // Only happens for the zero tensor or degenerate starts.
    vs[0] = -vs[0];
    r.value = -r.value;
  }
  r.witnesses = std::move(vs);
  r.restarts_used = 1;
  return r;
}

OpNormResult op_norm(const Tensor& t, const OpNormOptions& opts) {
  conjugate_exponent(opts.q);  // validates q
  if (opts.restarts < 1) throw DomainError("restarts must be >= 1");
  if (t.order() == 1) return exact_order_one(t, opts.q);
  if (t.order() == 2 && opts.q == 2.0) return exact_matrix(t);

  OpNormResult best;
  best.value = -1.0;
  for (int rs = 0; rs < opts.restarts; ++rs) {
    std::mt19937_64 rng(substream_seed(opts.seed, static_cast<std::uint64_t>(rs)));
    std::vector<Eigen::VectorXd> start;
    for (int k = 0; k < t.order(); ++k) start.push_back(random_start(t.dim(), opts.q, rng));
    OpNormResult r = op_norm_from(t, std::move(start), opts.q, opts.tol, opts.max_sweeps);
    if (r.value > best.value) best = std::move(r);
  }
  best.restarts_used = opts.restarts;
  return best;
}

namespace {

// Points on the Euclidean unit sphere, one hemisphere (sign symmetry of the
// multilinear form makes the other half redundant).
std::vector<Eigen::VectorXd> hemisphere_grid(int n, int g) {
  std::vector<Eigen::VectorXd> pts;
  const double pi = std::numbers::pi;
  auto push = [&](std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    pts.push_back(v);
  };
  if (n == 1) {
    push({1.0});
  } else if (n == 2) {
    for (int a = 0; a < g; ++a) {
      const double phi = pi * a / g;
      push({std::cos(phi), std::sin(phi)});
    }
  } else if (n == 3) {
    const int nt = g / 2;
    for (int a = 0; a <= nt; ++a) {
      const double th = 0.5 * pi * a / nt;
      const int nphi = a == 0 ? 1 : 2 * g;
      for (int b = 0; b < nphi; ++b) {
        const double phi = pi * b / g;
        push({std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th)});
      }
    }
  } else {
    const int ns = g / 2;
    for (int c = 0; c <= ns; ++c) {
      const double psi = 0.5 * pi * c / ns;
      const int nt = c == 0 ? 0 : g;
      for (int a = 0; a <= nt; ++a) {
        const double th = pi * a / std::max(nt, 1);
        const int nphi = (c == 0 || a == 0 || a == nt) ? 1 : 2 * g;
        for (int b = 0; b < nphi; ++b) {
          const double phi = pi * b / g;
          push({std::sin(psi) * std::sin(th) * std::cos(phi),
                std::sin(psi) * std::sin(th) * std::sin(phi), std::sin(psi) * std::cos(th),
                std::cos(psi)});
        }
      }
    }
  }
  return pts;
}

std::vector<Eigen::VectorXd> sign_vertices(int n) {
  std::vector<Eigen::VectorXd> pts;
  // First coordinate fixed to +1 by sign symmetry.
  for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
    Eigen::VectorXd v(n);
    v[0] = 1.0;
    for (int i = 1; i < n; ++i) v[i] = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
    pts.push_back(v);
  }
  return pts;
}

struct Candidate {
  double value;
  std::vector<Eigen::VectorXd> vs;
};

}  // namespace

double op_norm_oracle(const Tensor& t, double q, int grid_per_angle) {
  if (t.dim() > 4 || t.order() > 3)
    throw CostGuardError("op_norm_oracle limited to dim <= 4 and order <= 3");
  if (grid_per_angle < 4) throw DomainError("grid_per_angle must be >= 4");
  const double p = conjugate_exponent(q);
  if (t.order() == 1) return exact_order_one(t, q).value;
  if (hs_norm(t) == 0.0) return 0.0;

  std::vector<Eigen::VectorXd> pts;
  if (q == 1.0) {
    pts = sign_vertices(t.dim());
  } else {
    pts = hemisphere_grid(t.dim(), grid_per_angle / 2);
    for (auto& v : pts) v /= lp_norm(v, p);
  }

  const int j = t.order();
  const int n = t.dim();
  constexpr std::size_t kKeep = 12;
  std::vector<Candidate> top;
  double floor_val = -std::numeric_limits<double>::infinity();
  auto offer = [&](double val, const std::vector<Eigen::VectorXd>& vs) {
    if (top.size() < kKeep) {
      top.push_back({val, vs});
    } else if (val > floor_val) {
      auto worst = std::min_element(top.begin(), top.end(),
                                    [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
      *worst = {val, vs};
    } else {
      return;
    }
    if (top.size() == kKeep) {
      floor_val = std::min_element(top.begin(), top.end(), [](const Candidate& a, const Candidate& b) {
                    return a.value < b.value;
                  })->value;
    }
  };

  std::vector<Eigen::VectorXd> vs(j, Eigen::VectorXd::Zero(n));
  if (j == 2) {
    const Eigen::MatrixXd m = t.as_matrix();
    for (const auto& a : pts) {
      vs[0] = a;
      const Eigen::VectorXd g = m.transpose() * a;
      vs[1] = dual_maximizer(g, q);
      offer(g.dot(vs[1]), vs);
    }
  } else {
    for (const auto& a : pts) {
      // Slice T(a, ., .) as an n x n matrix.
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            m(b, c) += a[i] * t[(static_cast<std::size_t>(i) * n + b) * n + c];
      for (const auto& b : pts) {
        const Eigen::VectorXd g = m.transpose() * b;
        const double val = lp_norm(g, q);
        if (val > floor_val) {
          vs[0] = a;
          vs[1] = b;
          vs[2] = dual_maximizer(g, q);
          offer(val, vs);
        }
      }
    }
  }

  double best = 0.0;
  for (const auto& c : top) {
    best = std::max(best, c.value);
    if (q == 1.0) continue;  // vertex enumeration is already exact
    best = std::max(best, op_norm_from(t, c.vs, q, 1e-14, 5000).value);
  }
  return best;
}

double symmetric_power_norm(const SymTensor& st, int restarts, std::uint64_t seed) {
  const Tensor& t = st.tensor();
  const int j = t.order();
  const int n = t.dim();
  if (j == 1) return exact_order_one(t, 2.0).value;
  // Shifted power iteration (SS-HOPM); the shift makes the iteration
  // monotone for both signs of the form.
  const double shift = (j - 1) * hs_norm(t);
  double best = 0.0;
  for (int sign = -1; sign <= 1; sign += 2) {
    const Tensor ts = t.scaled(sign);
    for (int rs = 0; rs < restarts; ++rs) {
      std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(rs) * 2 + (sign > 0)));
      Eigen::VectorXd v = random_start(n, 2.0, rng);
      double val = -std::numeric_limits<double>::infinity();
      for (int it = 0; it < 20000; ++it) {
        std::vector<Eigen::VectorXd> vs(j, v);
        Eigen::VectorXd g = contract_except(ts, vs, j - 1) + shift * v;
        v = g / g.norm();
        std::vector<Eigen::VectorXd> ws(j, v);
        const double nv = contract(ts, ws);
        if (std::abs(nv - val) <= 1e-15 * std::max(1.0, std::abs(nv))) {
          val = nv;
          break;
        }
        val = nv;
      }
      best = std::max(best, val);
    }
  }
  return best;
}

}  // namespace hoc
