// SPDX-License-Identifier: Apache-2.0
#include "hoc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/beta.hpp>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"

namespace hoc {

double clopper_pearson_upper(std::size_t k, std::size_t n, double delta) {
  if (n == 0) throw DomainError("need at least one trial");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  if (k > n) throw DomainError("successes exceed trials");
  if (k == n) return 1.0;
  if (k == 0) return 1.0 - std::pow(delta, 1.0 / static_cast<double>(n));
  boost::math::beta_distribution<double> beta(static_cast<double>(k + 1), static_cast<double>(n - k));
  return boost::math::quantile(beta, 1.0 - delta);
}

EmpiricalTail empirical_tail(std::span<const double> values, double t, double delta) {
  if (values.empty()) throw DomainError("empirical_tail needs at least one value");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  std::size_t k = 0;
  for (double v : values)
    if (std::abs(v) >= t) ++k;
  EmpiricalTail e;
  e.fraction = static_cast<double>(k) / static_cast<double>(values.size());
  e.upper = clopper_pearson_upper(k, values.size(), delta);
  return e;
}

std::vector<double> evaluate_rows(const SampleBatch& batch, const SampleFunction& f) {
  std::vector<double> out(static_cast<std::size_t>(batch.data.rows()));
  Eigen::VectorXd row(batch.data.cols());
  for (Eigen::Index r = 0; r < batch.data.rows(); ++r) {
    row = batch.data.row(r).transpose();
    out[static_cast<std::size_t>(r)] = f(row);
  }
  return out;
}

McEstimate mc_estimate(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("need at least two values for a standard error");
  const double n = static_cast<double>(values.size());
  McEstimate e;
  e.mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  e.std_error = std::sqrt(var / n);
  e.inflated = e.mean + 3.0 * e.std_error;
  return e;
}

VerificationReport verify_tail_curve(std::span<const double> values, const BoundCurve& bound,
                                     const std::vector<double>& grid, double delta) {
  if (values.empty()) throw DomainError("no sample values");
  if (grid.empty()) throw DomainError("empty grid");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  std::vector<double> mags(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
  std::sort(mags.begin(), mags.end());
  const double point_delta = delta / static_cast<double>(grid.size());

  VerificationReport rep;
  rep.mode = VerifyMode::MonteCarlo;
  rep.sample_count = values.size();
  rep.delta = delta;
  rep.grid = grid;
  for (double t : grid) {
    const auto it = std::lower_bound(mags.begin(), mags.end(), t);
    const std::size_t k = static_cast<std::size_t>(mags.end() - it);
    const double frac = static_cast<double>(k) / static_cast<double>(mags.size());
    const double ucb = clopper_pearson_upper(k, mags.size(), point_delta);
    const double b = bound(t);
    const bool ok = b >= 1.0 || ucb <= b;
    rep.empirical_tail.push_back(frac);
    rep.empirical_upper_confidence.push_back(ucb);
    rep.theoretical.push_back(b);
    rep.verdicts.push_back(ok);
    rep.pass = rep.pass && ok;
  }
  return rep;
}

VerificationReport verify_tail_curve(const FiniteProductSpace& space, const ValueTable& f,
                                     const BoundCurve& bound, const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("empty grid");
  const double mean = exact_mean(f, space);
  ValueTable centered(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) centered[c] = f[c] - mean;
  const auto dist = exact_distribution(centered, space);

  VerificationReport rep;
  rep.mode = VerifyMode::Exhaustive;
  rep.sample_count = space.size();
  rep.delta = 0.0;
  rep.grid = grid;
  for (double t : grid) {
    std::vector<double> mass;
    for (const auto& [v, p] : dist)
      if (std::abs(v) >= t) mass.push_back(p);
    const double tail = std::min(1.0, pairwise_sum(mass));
    const double b = bound(t);
    const bool ok = b >= 1.0 || tail <= b;
    rep.empirical_tail.push_back(tail);
    rep.empirical_upper_confidence.push_back(tail);
    rep.theoretical.push_back(b);
    rep.verdicts.push_back(ok);
    rep.pass = rep.pass && ok;
  }
  return rep;
}

VerificationReport verify_tail(const SampleBatch& batch, const SampleFunction& f, const Setting& s,
                               const LevelCoefficients& K, const std::vector<double>& grid, double delta) {
  const std::vector<double> values = evaluate_rows(batch, f);
  return verify_tail_curve(values, [&](double t) { return tail_bound(s, K, t); }, grid, delta);
}

VerificationReport verify_tail(const FiniteProductSpace& space, const ValueTable& f, const Setting& s,
                               const LevelCoefficients& K, const std::vector<double>& grid) {
  return verify_tail_curve(space, f, [&](double t) { return tail_bound(s, K, t); }, grid);
}

MomentReport verify_moment_recursion(const FiniteProductSpace& space, const ValueTable& f, const Setting& s,
                                     const LevelCoefficients& K, const std::vector<double>& r_list) {
  MomentReport rep;
  rep.mode = VerifyMode::Exhaustive;
  for (double r : r_list) {
    MomentRow row;
    row.r = r;
    row.bound = moment_growth_bound(s, K, r);
    row.moment = exact_moment(f, space, r);
    row.pass = row.moment <= row.bound;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

MomentReport verify_moment_recursion(const SampleBatch& batch, const SampleFunction& f, const Setting& s,
                                     const LevelCoefficients& K, const std::vector<double>& r_list) {
  const std::vector<double> values = evaluate_rows(batch, f);
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  MomentReport rep;
  rep.mode = VerifyMode::MonteCarlo;
  for (double r : r_list) {
    MomentRow row;
    row.r = r;
    row.bound = moment_growth_bound(s, K, r);
    std::vector<double> pw(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) pw[i] = std::pow(std::abs(values[i] - mean), r);
    const McEstimate est = mc_estimate(pw);
    const double m = std::max(est.mean, 0.0);
    row.moment = std::pow(m, 1.0 / r);
    // Delta method for x -> x^{1/r}.
    row.std_error = m > 0.0 ? est.std_error * std::pow(m, 1.0 / r - 1.0) / r : 0.0;
    row.pass = row.moment - 3.0 * row.std_error <= row.bound;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

MomentReport verify_first_order_moments(const FiniteProductSpace& space, const ValueTable& f, const Setting& s,
                                        const std::vector<double>& r_list) {
  s.validate();
  const ValueTable h = h_norm_table(f, space);
  MomentReport rep;
  rep.mode = VerifyMode::Exhaustive;
  for (double r : r_list) {
    if (!(r >= s.r0)) throw DomainError("moment check needs r >= r0");
    MomentRow row;
    row.r = r;
    row.moment = exact_moment(f, space, r);
    row.bound = s.L * s.sigma * s.gamma.value_or(1.0) * std::pow(r, 1.0 / s.p) * lr_norm(h, space, r);
    row.pass = row.moment <= row.bound;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

double exp_moment_integral(const FiniteProductSpace& space, const ValueTable& g, double coefficient,
                           double exponent) {
  ValueTable e(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) e[c] = std::exp(coefficient * std::pow(std::abs(g[c]), exponent));
  return expectation(e, space);
}

ExpMomentResult verify_exp_moment(const FiniteProductSpace& space, const ValueTable& f,
                                  const ExpMomentCertificate& cert) {
  const double mean = exact_mean(f, space);
  ValueTable centered(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) centered[c] = f[c] - mean;
  ExpMomentResult r;
  r.integral = exp_moment_integral(space, centered, cert.coefficient, cert.exponent);
  r.pass = r.integral <= 2.0;
  return r;
}

// ----- d-LSI search -----

namespace {

constexpr std::size_t kDlsiMaxSupport = 4096;

struct DlsiProblem {
  const FiniteProductSpace& space;
  std::vector<std::size_t> support;

  double ratio_of_logs(const std::vector<double>& w) const {
    ValueTable f(space.size(), 1.0);
    const double wmax = *std::max_element(w.begin(), w.end());
    for (std::size_t s = 0; s < support.size(); ++s) f[support[s]] = std::exp(w[s] - wmax);
    return dlsi_ratio(space, f);
  }
};

// Maximize phi on [lo, hi] by golden section starting from a coarse scan.
std::pair<double, double> line_max(const std::function<double(double)>& phi, double lo, double hi) {
  constexpr int kScan = 9;
  double best_x = 0.0, best_v = phi(0.0);
  int best_i = -1;
  for (int i = 0; i < kScan; ++i) {
    const double x = lo + (hi - lo) * i / (kScan - 1);
    const double v = phi(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
      best_i = i;
    }
  }
  if (best_i < 0) return {0.0, best_v};
  const double step = (hi - lo) / (kScan - 1);
  double a = best_x - step, b = best_x + step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 40; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = phi(d);
    }
  }
  const double x = fc > fd ? c : d;
  const double v = std::max(fc, fd);
  if (v > best_v) return {x, v};
  return {best_x, best_v};
}

}  // namespace

double dlsi_ratio(const FiniteProductSpace& space, const ValueTable& f) {
  const double ent = entropy_of_square(f, space);
  ValueTable d2(space.size(), 0.0);
  for (std::size_t c = 0; c < space.size(); ++c)
    if (space.probability(c) > 0.0) d2[c] = d_operator(f, space, c).squaredNorm();
  const double den = 2.0 * expectation(d2, space);
  if (den == 0.0) return ent == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return ent / den;
}

DlsiSearchResult verify_dlsi(const FiniteProductSpace& space, double sigma2_claimed, int budget,
                             std::uint64_t seed) {
  if (budget < 1) throw DomainError("search budget must be >= 1");
  DlsiProblem prob{space, {}};
  for (std::size_t c = 0; c < space.size(); ++c)
    if (space.probability(c) > 0.0) prob.support.push_back(c);
  if (prob.support.size() > kDlsiMaxSupport) throw CostGuardError("d-LSI search limited to 4096 support points");

  DlsiSearchResult res;
  res.best_function.assign(space.size(), 1.0);
  const std::size_t m = prob.support.size();
  if (m < 2) {
    res.pass = 0.0 <= sigma2_claimed;
    return res;
  }
  static constexpr double kScales[] = {1e-3, 0.1, 0.5, 1.5, 4.0};
  for (int rs = 0; rs < budget; ++rs) {
    std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(rs)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale = kScales[rs % 5];
    std::vector<double> w(m);
    for (double& x : w) x = scale * gauss(rng);
    double cur = prob.ratio_of_logs(w);
    double step = std::max(scale, 1e-3);
    for (int sweep = 0; sweep < 60; ++sweep) {
      const double before = cur;
      double largest_move = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double w0 = w[k];
        auto phi = [&](double dx) {
          w[k] = w0 + dx;
          const double v = prob.ratio_of_logs(w);
          w[k] = w0;
          return std::isfinite(v) ? v : -1.0;
        };
        const auto [dx, v] = line_max(phi, -step, step);
        if (v > cur) {
          w[k] = w0 + dx;
          cur = v;
          largest_move = std::max(largest_move, std::abs(dx));
        }
      }
      step = std::max({2.0 * largest_move, 0.5 * step, 1e-7});
      if (cur - before <= 1e-13 * std::max(1.0, std::abs(cur))) break;
    }
    if (cur > res.max_ratio) {
      res.max_ratio = cur;
      const double wmax = *std::max_element(w.begin(), w.end());
      res.best_function.assign(space.size(), 1.0);
      for (std::size_t s = 0; s < m; ++s) res.best_function[prob.support[s]] = std::exp(w[s] - wmax);
    }
  }
  res.pass = res.max_ratio <= sigma2_claimed;
  return res;
}

// ----- finite differences -----

FiniteDifferenceResult finite_difference_suite(const PolyFunction& f, const ManifoldDescriptor& m,
                                               const std::vector<Eigen::MatrixXd>& points, double h,
                                               std::uint64_t seed, int directions) {
  if (!(h > 0.0 && h <= 1e-2)) throw DomainError("h must lie in (0, 1e-2]");
  FiniteDifferenceResult res;
  std::mt19937_64 rng(substream_seed(seed, 0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto fval = [&](const Eigen::MatrixXd& x) { return f.eval(vec(x)); };
  for (const auto& x : points) {
    check_on_manifold(m, x);
    const Eigen::MatrixXd g_amb = ambient_gradient(m, f, x);
    const Eigen::MatrixXd g_int = tangent_project(m, x, g_amb);
    if (g_int.norm() > g_amb.norm() * (1.0 + 1e-12) + 1e-300) res.contraction_holds = false;
    SymTensor hess;
    if (m.kind == ManifoldKind::Sphere) hess = sphere_hessian(f, x.col(0));
    for (int dir = 0; dir < directions; ++dir) {
      Eigen::MatrixXd z(x.rows(), x.cols());
      for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = gauss(rng);
      Eigen::MatrixXd u = tangent_project(m, x, z);
      if (u.norm() == 0.0) continue;
      u /= u.norm();
      const double fp = fval(manifold_curve(m, x, u, h));
      const double fm = fval(manifold_curve(m, x, u, -h));
      const double fd = (fp - fm) / (2.0 * h);
      const double exact = (g_int.array() * u.array()).sum();
      const double scale = g_int.norm();
      const double gerr = scale > 0.0 ? std::abs(fd - exact) / scale : std::abs(fd - exact);
      res.gradient_error = std::max(res.gradient_error, gerr);
      if (m.kind == ManifoldKind::Sphere) {
        const double f0 = fval(x);
        const double sd = (fp - 2.0 * f0 + fm) / (h * h);
        const Eigen::MatrixXd hm = hess.tensor().as_matrix();
        const double exact2 = u.col(0).dot(hm * u.col(0));
        const double hs = hs_norm(hess);
        const double herr = hs > 0.0 ? std::abs(sd - exact2) / hs : std::abs(sd - exact2);
        res.hessian_error = std::max(res.hessian_error, herr);
      }
    }
    ++res.points;
  }
  return res;
}

}  // namespace hoc
