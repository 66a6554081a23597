// SPDX-License-Identifier: Apache-2.0
#include "hoc/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"

namespace hoc {

namespace {

void check_table(const ValueTable& f, const FiniteProductSpace& space) {
  if (f.size() != space.size()) throw ShapeError("value table size != number of configurations");
}

void check_coord(const FiniteProductSpace& space, int i) {
  if (i < 0 || i >= space.n()) throw ShapeError("coordinate index out of range");
}

bool in_support(const FiniteProductSpace& space, std::size_t c) { return space.probability(c) > 0.0; }

}  // namespace

HValues h_ops(const ValueTable& f, const FiniteProductSpace& space, std::size_t x, int i) {
  check_table(f, space);
  check_coord(space, i);
  const int m = space.alphabet_size(i);
  HValues r;
  for (int a = 0; a < m; ++a) {
    const std::size_t xa = space.replace(x, i, a);
    if (!in_support(space, xa)) continue;
    const double d = f[x] - f[xa];
    r.h_plus = std::max(r.h_plus, d);
    r.h_minus = std::max(r.h_minus, -d);
    for (int b = a + 1; b < m; ++b) {
      const std::size_t xb = space.replace(x, i, b);
      if (!in_support(space, xb)) continue;
      r.h = std::max(r.h, std::abs(f[xa] - f[xb]));
    }
  }
  return r;
}

HVectors h_vectors(const ValueTable& f, const FiniteProductSpace& space, std::size_t x) {
  const int n = space.n();
  HVectors v{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    const HValues h = h_ops(f, space, x, i);
    v.h[i] = h.h;
    v.h_plus[i] = h.h_plus;
    v.h_minus[i] = h.h_minus;
  }
  return v;
}

ValueTable h_norm_table(const ValueTable& f, const FiniteProductSpace& space) {
  check_table(f, space);
  ValueTable out(space.size(), 0.0);
  for (std::size_t c = 0; c < space.size(); ++c)
    if (in_support(space, c)) out[c] = h_vectors(f, space, c).h.norm();
  return out;
}

ValueTable h_plus_norm_table(const ValueTable& f, const FiniteProductSpace& space) {
  check_table(f, space);
  ValueTable out(space.size(), 0.0);
  for (std::size_t c = 0; c < space.size(); ++c)
    if (in_support(space, c)) out[c] = h_vectors(f, space, c).h_plus.norm();
  return out;
}

SymTensor h_tensor(const ValueTable& f, const FiniteProductSpace& space, int j, std::size_t x) {
  check_table(f, space);
  const int n = space.n();
  if (j < 1 || j > n) throw DomainError("h_tensor order must satisfy 1 <= j <= n");
  if (x >= space.size()) throw ShapeError("configuration out of range");

  // Work estimate over the distinct sorted tuples.
  double work = 0.0;
  {
    std::vector<int> idx(j);
    for (int s = 0; s < j; ++s) idx[s] = s;
    for (;;) {
      double w = std::ldexp(1.0, j);
      for (int i : idx) w *= static_cast<double>(space.alphabet_size(i)) * space.alphabet_size(i);
      work += w;
      int s = j - 1;
      while (s >= 0 && idx[s] == n - j + s) --s;
      if (s < 0) break;
      ++idx[s];
      for (int t = s + 1; t < j; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
  if (work > 1e8) throw CostGuardError("h_tensor enumeration too large");

  Tensor t(j, n);
  std::vector<int> idx(j);
  for (int s = 0; s < j; ++s) idx[s] = s;
  std::vector<int> a(j), b(j);
  for (;;) {
    // Enumerate base symbols a and replacement symbols b for the tuple.
    double best = 0.0;
    std::vector<int> sizes(j);
    for (int s = 0; s < j; ++s) sizes[s] = space.alphabet_size(idx[s]);
    std::fill(a.begin(), a.end(), 0);
    for (bool more_a = true; more_a;) {
      std::fill(b.begin(), b.end(), 0);
      for (bool more_b = true; more_b;) {
        double sum = 0.0;
        bool ok = true;
        for (int mask = 0; mask < (1 << j) && ok; ++mask) {
          std::size_t c = x;
          for (int s = 0; s < j; ++s) c = space.replace(c, idx[s], (mask >> s) & 1 ? b[s] : a[s]);
          if (!in_support(space, c)) ok = false;
          sum += (__builtin_popcount(static_cast<unsigned>(mask)) & 1) ? -f[c] : f[c];
        }
        if (ok) best = std::max(best, std::abs(sum));
        int s = 0;
        while (s < j && ++b[s] == sizes[s]) b[s++] = 0;
        more_b = s < j;
      }
      int s = 0;
      while (s < j && ++a[s] == sizes[s]) a[s++] = 0;
      more_a = s < j;
    }
    // Fill every permutation of the tuple.
    std::vector<int> perm = idx;
    do {
      t.at(perm) = best;
    } while (std::next_permutation(perm.begin(), perm.end()));

    int s = j - 1;
    while (s >= 0 && idx[s] == n - j + s) --s;
    if (s < 0) break;
    ++idx[s];
    for (int u = s + 1; u < j; ++u) idx[u] = idx[u - 1] + 1;
  }
  return SymTensor::checked(t, 0.0);
}

Eigen::VectorXd d_operator(const ValueTable& f, const FiniteProductSpace& space, std::size_t x) {
  check_table(f, space);
  const int n = space.n();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const std::vector<double> cond = space.conditional(x, i);
    double mean = 0.0;
    for (int a = 0; a < space.alphabet_size(i); ++a) mean += cond[a] * f[space.replace(x, i, a)];
    double var = 0.0;
    for (int a = 0; a < space.alphabet_size(i); ++a) {
      const double e = f[space.replace(x, i, a)] - mean;
      var += cond[a] * e * e;
    }
    d[i] = std::sqrt(var);
  }
  return d;
}

namespace {

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) s += std::abs(p[a] - q[a]);
  return 0.5 * s;
}

double beta_tilde_product(const FiniteProductSpace& space) {
  // Conditioning is irrelevant for product measures.
  double beta = 1.0;
  for (int i = 0; i < space.n(); ++i) {
    std::vector<double> marg(space.alphabet_size(i), 0.0);
    for (std::size_t c = 0; c < space.size(); ++c) marg[space.symbol(c, i)] += space.probability(c);
    for (double p : marg)
      if (p > 0.0) beta = std::min(beta, p);
  }
  return beta;
}

double beta_tilde_general(const FiniteProductSpace& space) {
  const int n = space.n();
  double beta = 1.0;
  for (unsigned s_mask = 0; s_mask + 1 < (1u << n); ++s_mask) {
    // mass of x_S, and of (x_S, x_i) for each i outside S.
    std::map<std::vector<int>, double> mass_s;
    std::vector<std::map<std::pair<std::vector<int>, int>, double>> mass_si(n);
    for (std::size_t c = 0; c < space.size(); ++c) {
      const double p = space.probability(c);
      if (p == 0.0) continue;
      std::vector<int> key;
      for (int i = 0; i < n; ++i)
        if (s_mask >> i & 1u) key.push_back(space.symbol(c, i));
      mass_s[key] += p;
      for (int i = 0; i < n; ++i)
        if (!(s_mask >> i & 1u)) mass_si[i][{key, space.symbol(c, i)}] += p;
    }
    for (int i = 0; i < n; ++i) {
      if (s_mask >> i & 1u) continue;
      for (const auto& [key, m] : mass_si[i]) beta = std::min(beta, m / mass_s.at(key.first));
    }
  }
  return beta;
}

}  // namespace

DependenceProfile dependence_profile(const FiniteProductSpace& space) {
  const int n = space.n();
  if (n > 12) throw CostGuardError("dependence_profile limited to n <= 12");
  DependenceProfile prof;
  prof.J = Eigen::MatrixXd::Zero(n, n);
  if (!space.is_product()) {
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (!in_support(space, x)) continue;
      for (int j = 0; j < n; ++j) {
        for (int b = 0; b < space.alphabet_size(j); ++b) {
          const std::size_t y = space.replace(x, j, b);
          if (y <= x || !in_support(space, y)) continue;
          for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            const double tv = tv_distance(space.conditional(x, i), space.conditional(y, i));
            prof.J(i, j) = std::max(prof.J(i, j), tv);
          }
        }
      }
    }
  }
  prof.J_opnorm = op_norm(Tensor::from_matrix(prof.J)).value;
  prof.beta_tilde = space.is_product() ? beta_tilde_product(space) : beta_tilde_general(space);
  prof.alpha1 = prof.beta_tilde;
  prof.alpha2 = std::max(0.0, 1.0 - prof.J_opnorm);
  return prof;
}

DlsiConstants dlsi_constant(double alpha1, double alpha2) {
  if (!(alpha2 > 0.0)) throw DobrushinError("alpha2 must be positive (Dobrushin condition)");
  if (alpha2 > 1.0) throw DomainError("alpha2 must lie in (0,1]");
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) throw DomainError("alpha1 must lie in (0,1)");
  DlsiConstants c;
  c.at_constant = 1.0 / (alpha1 * alpha2 * alpha2);
  c.sigma2 = std::log(1.0 / alpha1) / (2.0 * std::log(2.0) * alpha1 * alpha2 * alpha2);
  return c;
}

DlsiConstants dlsi_constant(const DependenceProfile& profile) {
  if (profile.J_opnorm >= 1.0) throw DobrushinError("interdependence matrix has operator norm >= 1");
  return dlsi_constant(profile.alpha1, 1.0 - profile.J_opnorm);
}

std::vector<std::pair<double, double>> exact_distribution(const ValueTable& f,
                                                          const FiniteProductSpace& space) {
  check_table(f, space);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t c = 0; c < space.size(); ++c)
    if (in_support(space, c)) pts.emplace_back(f[c], space.probability(c));
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [v, p] : pts) {
    if (!out.empty() && std::abs(v - out.back().first) <= 1e-12 * std::max(1.0, std::abs(v))) {
      out.back().second += p;
    } else {
      out.emplace_back(v, p);
    }
  }
  return out;
}

double expectation(const ValueTable& g, const FiniteProductSpace& space) {
  check_table(g, space);
  std::vector<double> w(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) w[c] = space.probability(c) == 0.0 ? 0.0 : space.probability(c) * g[c];
  return pairwise_sum(w);
}

double exact_mean(const ValueTable& f, const FiniteProductSpace& space) { return expectation(f, space); }

double lr_norm(const ValueTable& g, const FiniteProductSpace& space, double r) {
  check_table(g, space);
  if (std::isinf(r)) {
    double m = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c)
      if (in_support(space, c)) m = std::max(m, std::abs(g[c]));
    return m;
  }
  if (!(r > 0.0)) throw DomainError("r must be positive");
  ValueTable a(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) a[c] = std::pow(std::abs(g[c]), r);
  return std::pow(expectation(a, space), 1.0 / r);
}

double exact_moment(const ValueTable& f, const FiniteProductSpace& space, double r) {
  const double m = exact_mean(f, space);
  ValueTable c(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) c[k] = f[k] - m;
  return lr_norm(c, space, r);
}

double phi_entropy(const ValueTable& g, const FiniteProductSpace& space, const PhiEntropy& phi) {
  check_table(g, space);
  for (std::size_t c = 0; c < g.size(); ++c)
    if (in_support(space, c) && g[c] < 0.0) throw DomainError("entropy needs a nonnegative function");
  const double mean = expectation(g, space);
  if (std::holds_alternative<LogEntropy>(phi)) {
    auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    ValueTable t(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) t[c] = xlogx(g[c]);
    return std::max(0.0, expectation(t, space) - xlogx(mean));
  }
  const double q = std::get<PowerEntropy>(phi).q;
  if (!(q > 1.0)) throw DomainError("power entropy needs q > 1");
  ValueTable t(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) t[c] = std::pow(g[c], q);
  return std::max(0.0, expectation(t, space) - std::pow(mean, q));
}

double entropy_of_square(const ValueTable& f, const FiniteProductSpace& space) {
  check_table(f, space);
  ValueTable sq(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) sq[c] = f[c] * f[c];
  const double m = expectation(sq, space);
  if (m == 0.0) return 0.0;
  // With u = f^2/m - 1: Ent(f^2) = m E[(1+u) log(1+u) - u], each term >= 0.
  ValueTable t(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double u = sq[c] / m - 1.0;
    t[c] = u <= -1.0 ? 1.0 : (1.0 + u) * std::log1p(u) - u;
  }
  return m * expectation(t, space);
}

FiniteProductSpace ising(const IsingSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw DomainError("Ising model needs n >= 1");
  if (n > 22) throw CostGuardError("Ising model limited to n <= 22");
  if (!spec.fields.empty() && static_cast<int>(spec.fields.size()) != n)
    throw ShapeError("fields must be empty or have length n");
  for (const auto& e : spec.edges)
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n || e.i == e.j) throw DomainError("bad Ising edge");
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> energy(size);
  for (std::size_t c = 0; c < size; ++c) {
    auto spin = [&](int i) { return (c >> (n - 1 - i)) & 1u ? 1.0 : -1.0; };
    double h = 0.0;
    for (const auto& e : spec.edges) h += e.coupling * spin(e.i) * spin(e.j);
    for (int i = 0; i < static_cast<int>(spec.fields.size()); ++i) h += spec.fields[i] * spin(i);
    energy[c] = spec.beta * h;
  }
  const double emax = *std::max_element(energy.begin(), energy.end());
  std::vector<double> w(size);
  for (std::size_t c = 0; c < size; ++c) w[c] = std::exp(energy[c] - emax);
  const double z = pairwise_sum(w);
  for (double& x : w) x /= z;
  return FiniteProductSpace(std::vector<std::vector<double>>(n, {-1.0, 1.0}), std::move(w), false);
}

}  // namespace hoc
