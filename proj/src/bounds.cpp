// SPDX-License-Identifier: Apache-2.0
#include "hoc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"

namespace hoc {

namespace {
constexpr double kE = std::numbers::e;
const double kLog2 = std::log(2.0);
}  // namespace

void Setting::validate() const {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("setting: p must be positive and finite");
  if (!(r0 > 1.0) || !std::isfinite(r0)) throw DomainError("setting: r0 must exceed 1");
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("setting: L must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("setting: sigma must be positive");
  if (d < 1) throw DomainError("setting: d must be >= 1");
  if (q && std::abs(1.0 / p + 1.0 / *q - 1.0) > 1e-12) throw DomainError("setting: q is not conjugate to p");
  if (gamma && !(*gamma >= 1.0)) throw DomainError("setting: gamma must be >= 1");
}

Setting Setting::with_levels(int levels) const {
  Setting s = *this;
  s.d = levels;
  s.validate();
  return s;
}

double const_c(double p, int d, double r0, double L) {
  const double lmax = std::max(std::pow(L, 1.0 / d), L);
  return std::pow(std::pow(r0, 1.0 / p) - 1.0, p) /
         (2.0 * kE * std::pow(lmax, p) * r0 * std::max(r0, p / d));
}

double const_C(double p, double r0, double L) { return kLog2 / (r0 * std::pow(L * kE, p)); }

namespace {

void check_levels(const Setting& s, const LevelCoefficients& K) {
  s.validate();
  if (static_cast<int>(K.K.size()) != s.d) throw ShapeError("need exactly d level coefficients");
  for (double k : K.K)
    if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("level coefficients must be finite and nonnegative");
}

// min over levels with K_j > 0 of (t/K_j)^{p/j}; +inf if none.
double level_min(double p, const std::vector<double>& K, double t) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < K.size(); ++j) {
    if (K[j] == 0.0) continue;
    m = std::min(m, std::pow(t / K[j], p / static_cast<double>(j + 1)));
  }
  return m;
}

double capped(double exponent) { return std::min(1.0, 2.0 * std::exp(-exponent)); }

}  // namespace

double tail_bound(const Setting& s, const LevelCoefficients& K, double t) {
  check_levels(s, K);
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  const double m = level_min(s.p, K.K, t);
  if (std::isinf(m)) {
    if (t == 0.0) return 1.0;
    throw DegenerateLevelsError("all level coefficients are zero");
  }
  const double g = s.gamma.value_or(1.0);
  const double rate = const_C(s.p, s.r0, s.L) / std::pow(g * s.d * s.sigma, s.p);
  return capped(rate * m);
}

ExpMomentCertificate exp_moment_certificate(const Setting& s, const LevelCoefficients& K) {
  check_levels(s, K);
  const double g = s.gamma.value_or(1.0);
  ExpMomentCertificate c;
  c.exponent = s.p / s.d;
  c.coefficient = const_c(s.p, s.d, s.r0, s.L) / std::pow(g * s.sigma, s.p);
  c.normalized = true;
  for (int j = 1; j < s.d; ++j)
    if (K.K[j - 1] > std::pow(s.sigma, s.d - j)) c.normalized = false;
  if (K.K[s.d - 1] > 1.0) c.normalized = false;
  return c;
}

double moment_growth_bound(const Setting& s, const LevelCoefficients& K, double r) {
  check_levels(s, K);
  if (!(r >= s.r0)) throw DomainError("moment_growth_bound needs r >= r0");
  const double ls = s.L * s.sigma * s.gamma.value_or(1.0);
  double sum = 0.0;
  for (int j = 1; j <= s.d; ++j) sum += std::pow(ls, j) * std::pow(r, j / s.p) * K.K[j - 1];
  return sum;
}

double tail_from_moments(const MomentGrowthSpec& m, double t) {
  if (m.terms.empty()) throw DomainError("moment spec needs at least one term");
  if (!(m.r0 >= 1.0)) throw DomainError("moment spec needs r0 >= 1");
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  double pmax = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& term : m.terms) {
    if (!(term.C > 0.0) || !(term.p > 0.0)) throw DomainError("moment terms need C_j, p_j > 0");
    pmax = std::max(pmax, term.p);
    mn = std::min(mn, std::pow(t, term.p) / term.C);
  }
  const double j = static_cast<double>(m.terms.size());
  return capped(kLog2 / (m.r0 * std::pow(j * kE, pmax)) * mn);
}

MomentGrowthSpec moment_spec_from_levels(const Setting& s, const LevelCoefficients& K) {
  check_levels(s, K);
  const double ls = s.L * s.sigma * s.gamma.value_or(1.0);
  MomentGrowthSpec m;
  m.r0 = s.r0;
  for (int j = 1; j <= s.d; ++j) {
    if (K.K[j - 1] == 0.0) continue;
    m.terms.push_back({std::pow(std::pow(ls, j) * K.K[j - 1], s.p / j), s.p / j});
  }
  if (m.terms.empty()) throw DegenerateLevelsError("all level coefficients are zero");
  return m;
}

double hw_constant(const Setting& s) {
  s.validate();
  return kLog2 / (s.r0 * std::pow(2.0 * s.L * kE, s.p));
}

double hw_bound(const Setting& s, double hs, double op, double t) {
  const double c = hw_constant(s);
  if (!(hs >= 0.0) || !(op >= 0.0)) throw DomainError("norms must be nonnegative");
  if (hs == 0.0 && op == 0.0) throw DegenerateLevelsError("both matrix norms are zero");
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  const double s2 = s.sigma * s.sigma;
  double m = std::numeric_limits<double>::infinity();
  if (hs > 0.0) m = std::min(m, std::pow(t / (s.L * s2 * hs), s.p));
  if (op > 0.0) m = std::min(m, std::pow(t / (s2 * op), s.p / 2.0));
  return capped(c * m);
}

double chaos_sup_bound(const std::vector<double>& EW, double a, double b, double sigma2, double t) {
  if (!(b > a)) throw DomainError("need b > a");
  if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be positive");
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  if (EW.empty()) throw DomainError("need at least one level");
  const double d = static_cast<double>(EW.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < EW.size(); ++j) {
    if (!(EW[j] >= 0.0)) throw DomainError("expected suprema must be nonnegative");
    if (EW[j] == 0.0) continue;
    m = std::min(m, std::pow(t / (d * kE * EW[j]), 2.0 / static_cast<double>(j + 1)));
  }
  if (std::isinf(m)) {
    if (t == 0.0) return 1.0;
    throw DegenerateLevelsError("all expected suprema are zero");
  }
  return capped(m / (2.0 * sigma2 * (b - a) * (b - a)));
}

// ----- catalog -----

namespace {

int need_int(const std::optional<int>& v, const char* what) {
  if (!v) throw DomainError(std::string("catalog: missing parameter ") + what);
  return *v;
}

double need_real(const std::optional<double>& v, const char* what) {
  if (!v) throw DomainError(std::string("catalog: missing parameter ") + what);
  return *v;
}

Setting lsi_setting(double sigma2, int d, const std::string& tag) {
  if (!(sigma2 > 0.0)) throw DomainError("catalog: sigma2 must be positive");
  Setting s;
  s.p = 2.0;
  s.r0 = 2.0;
  s.L = 1.0;
  s.sigma = std::sqrt(sigma2);
  s.q = 2.0;
  s.d = d;
  s.tag = tag;
  return s;
}

Setting lsq_setting(double p, double sigma_q, int d, const std::string& tag) {
  if (!(p >= 2.0) || std::isinf(p)) throw DomainError("catalog: p must be finite and >= 2");
  if (!(sigma_q > 0.0)) throw DomainError("catalog: sigma_q must be positive");
  const double q = p / (p - 1.0);
  Setting s;
  s.p = p;
  s.q = q;
  s.r0 = q;
  s.L = std::pow(4.0, 1.0 / q) * (p - 1.0) / std::pow(kLog2, 1.0 / q);
  s.sigma = std::pow(sigma_q, 1.0 / q);
  s.d = d;
  s.tag = tag;
  return s;
}

}  // namespace

std::vector<std::string> catalog_tags() {
  return {"lsi",     "gaussian",  "poincare",  "lsq",  "pgen", "sphere", "cone_lp",
          "stiefel", "grassmann", "independent_bounded", "dlsi"};
}

Setting setting_catalog(const std::string& tag, const CatalogParams& prm) {
  if (prm.d < 1) throw DomainError("catalog: d must be >= 1");
  const int d = prm.d;
  Setting s;
  if (tag == "lsi") {
    s = lsi_setting(need_real(prm.sigma2, "sigma2"), d, tag);
  } else if (tag == "gaussian") {
    s = lsi_setting(1.0, d, tag);
  } else if (tag == "poincare") {
    const double s2 = need_real(prm.sigma2, "sigma2");
    if (!(s2 > 0.0)) throw DomainError("catalog: sigma2 must be positive");
    s.p = 1.0;
    s.r0 = 2.0;
    s.L = 1.0 / std::sqrt(2.0);
    s.sigma = std::sqrt(s2);
    s.d = d;
    s.tag = tag;
  } else if (tag == "lsq") {
    s = lsq_setting(need_real(prm.p, "p"), need_real(prm.sigma_q, "sigma_q"), d, tag);
  } else if (tag == "pgen") {
    const double p = need_real(prm.p, "p");
    if (!(p >= 2.0) || std::isinf(p)) throw DomainError("catalog: p must be finite and >= 2");
    const double q = p / (p - 1.0);
    s = lsq_setting(p, std::pow(2.0, q) * std::pow(q, q - 1.0), d, tag);
  } else if (tag == "sphere") {
    const int n = need_int(prm.n, "n");
    if (n < 2) throw DomainError("catalog: sphere needs n >= 2");
    s = lsi_setting(1.0 / (n - 1.0), d, tag);
  } else if (tag == "cone_lp") {
    const int n = need_int(prm.n, "n");
    const double p = need_real(prm.p, "p");
    if (n < 3) throw DomainError("catalog: cone measure needs n >= 3");
    if (!(p >= 2.0) || std::isinf(p)) throw DomainError("catalog: p must be finite and >= 2");
    const double q = p / (p - 1.0);
    const double sq = 3.0 * std::pow(4.0, q) * std::pow(q, q - 1.0) * std::pow(n, -1.0 / (p - 1.0));
    s = lsq_setting(p, sq, d, tag);
  } else if (tag == "stiefel" || tag == "grassmann") {
    const int n = need_int(prm.n, "n");
    const int k = need_int(prm.k, "k");
    if (n < 3 || k < 1 || k >= n) throw DomainError("catalog: need n >= 3 and 1 <= k < n");
    s = lsi_setting((tag == "stiefel" ? 4.0 : 8.0) / (n - 2.0), d, tag);
  } else if (tag == "independent_bounded") {
    // Full chain L σ = sqrt(8κ); positive-part chain sqrt(2κ). Keep the max.
    s.p = 2.0;
    s.r0 = 2.0;
    s.L = std::sqrt(8.0 * kappa());
    s.sigma = 1.0;
    s.q = 2.0;
    s.d = d;
    s.tag = tag;
  } else if (tag == "dlsi") {
    const double s2 = need_real(prm.sigma2, "sigma2");
    if (!(s2 > 0.0)) throw DomainError("catalog: sigma2 must be positive");
    // Full chain L σ = sqrt(σ²/2); positive-part chain sqrt(2σ²). Keep the max.
    s.p = 2.0;
    s.r0 = 2.0;
    s.L = std::sqrt(2.0);
    s.sigma = std::sqrt(s2);
    s.q = 2.0;
    s.d = d;
    s.tag = tag;
  } else {
    throw DomainError("catalog: unknown setting tag '" + tag + "'");
  }
  s.validate();
  return s;
}

namespace {

ConstantRow row(std::string tag, std::string which, std::map<std::string, double> params, double stated,
                double engine) {
  ConstantRow r{std::move(tag), std::move(which), std::move(params), stated, engine, false};
  r.agrees = std::abs(stated - engine) <= 1e-12 * std::max(std::abs(stated), std::abs(engine));
  return r;
}

}  // namespace

std::vector<ConstantRow> stated_constant_table() {
  std::vector<ConstantRow> rows;
  const double k = kappa();
  const double e = kE;
  const double rt2 = std::sqrt(2.0);

  // LSI, d = 2.
  {
    const Setting s = setting_catalog("lsi", {.sigma2 = 1.0, .d = 2});
    rows.push_back(row("lsi", "c", {{"d", 2}}, (rt2 - 1) * (rt2 - 1) / (8 * e), const_c(s.p, s.d, s.r0, s.L)));
    rows.push_back(row("lsi", "C", {}, kLog2 / (2 * e * e), const_C(s.p, s.r0, s.L)));
  }
  // Poincaré, d = 2.
  {
    const int d = 2;
    const Setting s = setting_catalog("poincare", {.sigma2 = 1.0, .d = d});
    rows.push_back(row("poincare", "c", {{"d", d}}, std::pow(2.0, 1.0 / (2 * d)) / (4 * e),
                       const_c(s.p, s.d, s.r0, s.L)));
    rows.push_back(row("poincare", "C", {}, kLog2 / (rt2 * e), const_C(s.p, s.r0, s.L)));
  }
  // LS_q with p = 3, d = 2; both sides multiply 1/σ^p.
  {
    const double p = 3.0, q = p / (p - 1.0);
    const int d = 2;
    const Setting s = setting_catalog("lsq", {.p = p, .sigma_q = 1.0, .d = d});
    const double pc = std::pow(2.0, 2 * p - 3) * std::pow(std::pow(q, 1 / p) - 1, p) * std::pow(p - 1, p) /
                      (e * q * std::pow(kLog2, p - 1) * std::max(q, p / d));
    const double pC = std::pow(4.0, p - 1) * std::pow(p - 1, p) / (q * std::pow(kLog2, p - 2) * std::pow(e, p));
    rows.push_back(row("lsq", "c", {{"p", p}, {"d", d}}, pc, const_c(s.p, s.d, s.r0, s.L)));
    rows.push_back(row("lsq", "C", {{"p", p}}, pC, const_C(s.p, s.r0, s.L)));
  }
  // Cone measure, p = 3, d = 2. The stated constants multiply n directly;
  // the engine's c/σ^p and C/σ^p carry n through σ^p, so divide the
  // n-free part of σ^p out before comparing.
  {
    const double p = 3.0, q = p / (p - 1.0);
    const int d = 2, n = 10;
    const Setting s = setting_catalog("cone_lp", {.n = n, .p = p, .d = d});
    const double unit = std::pow(3.0 * std::pow(4.0, q) * std::pow(q, q - 1), p - 1);
    const double pc = std::pow(std::pow(q, p) - 1, p) * std::pow(p - 1, p) /
                      (2 * std::pow(3.0, p - 1) * std::pow(kLog2, p - 1) * std::pow(q, p * p + 2) * e);
    const double pC = std::pow(p - 1, p) / (4 * std::pow(3.0, p - 1) * q * q * std::pow(kLog2, p - 2) * std::pow(e, p));
    rows.push_back(row("cone_lp", "c", {{"p", p}, {"d", d}}, pc, const_c(s.p, s.d, s.r0, s.L) / unit));
    rows.push_back(row("cone_lp", "C", {{"p", p}}, pC, const_C(s.p, s.r0, s.L) / unit));
  }
  // Sphere, second order, intrinsic derivatives. Stated as exp((n-1)c|f|)
  // and exp(-(n-1)/C min(..)); engine: c/σ² and C/(d²σ²) with σ² = 1/(n-1).
  {
    const Setting s = setting_catalog("sphere", {.n = 10, .d = 2});
    rows.push_back(row("sphere_intrinsic", "c", {{"d", 2}}, 1 / (32 * e), const_c(s.p, 2, s.r0, s.L)));
    rows.push_back(row("sphere_intrinsic", "C", {{"d", 2}}, 16 * e * e / kLog2, 4.0 / const_C(s.p, s.r0, s.L)));
  }
  // Independent coordinates, L σ = sqrt(8κ).
  {
    const Setting s = setting_catalog("independent_bounded", {.d = 2});
    rows.push_back(row("independent_bounded", "c", {{"d", 2}}, (rt2 - 1) * (rt2 - 1) / (64 * k * e),
                       const_c(s.p, s.d, s.r0, s.L * s.sigma)));
    rows.push_back(row("independent_bounded", "C", {}, kLog2 / (16 * k * e * e), const_C(s.p, s.r0, s.L * s.sigma)));
  }
  // Finite spaces with a d-LSI; stated without σ, so compare at σ² = 1.
  {
    const Setting s = setting_catalog("dlsi", {.sigma2 = 1.0, .d = 2});
    rows.push_back(row("dlsi", "c", {{"d", 2}, {"sigma2", 1}}, (rt2 - 1) * (rt2 - 1) / (16 * k * e),
                       const_c(s.p, s.d, s.r0, s.L)));
    rows.push_back(row("dlsi", "C", {{"sigma2", 1}}, kLog2 / (4 * k * e * e), const_C(s.p, s.r0, s.L)));
  }
  return rows;
}

}  // namespace hoc
