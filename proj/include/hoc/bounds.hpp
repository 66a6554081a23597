// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hoc {

// Parameters of a moment-growth assumption ||f - Ef||_r <= L σ r^{1/p} ||Γf||_r
// for r >= r0, plus the number of levels d used by the bound.
struct Setting {
  double p = 2.0;
  double r0 = 2.0;
  double L = 1.0;
  double sigma = 1.0;
  int d = 1;
  std::optional<double> q;
  std::optional<double> gamma;
  std::string tag = "custom";
  bool positive_part_only = false;

  // Throws DomainError on invalid fields.
  void validate() const;
  Setting with_levels(int levels) const;
};

// K_1..K_{d-1} are L^1 norms, K_d is an L^∞ norm of the level operators.
struct LevelCoefficients {
  std::vector<double> K;
};

struct MomentTerm {
  double C;
  double p;
};

struct MomentGrowthSpec {
  std::vector<MomentTerm> terms;
  double r0 = 2.0;
};

double const_c(double p, int d, double r0, double L);
double const_C(double p, double r0, double L);

double tail_bound(const Setting& s, const LevelCoefficients& K, double t);

struct ExpMomentCertificate {
  double exponent = 0.0;
  double coefficient = 0.0;
  bool normalized = false;
};
ExpMomentCertificate exp_moment_certificate(const Setting& s, const LevelCoefficients& K);

double moment_growth_bound(const Setting& s, const LevelCoefficients& K, double r);

double tail_from_moments(const MomentGrowthSpec& m, double t);

// Terms C_j = ((Lσ)^j K_j)^{p/j}, p_j = p/j induced by moment_growth_bound.
MomentGrowthSpec moment_spec_from_levels(const Setting& s, const LevelCoefficients& K);

double hw_constant(const Setting& s);
double hw_bound(const Setting& s, double hs, double op, double t);

// Two-sided chaos bound; pass E W~_j instead of E W_j for the centered version.
double chaos_sup_bound(const std::vector<double>& EW, double a, double b, double sigma2, double t);

struct CatalogParams {
  std::optional<int> n{};
  std::optional<int> k{};
  std::optional<double> p{};
  std::optional<double> sigma2{};
  // LS_q constant σ^q (lsq tag only).
  std::optional<double> sigma_q{};
  int d = 1;
};

// Known settings: lsi, gaussian, poincare, lsq, pgen, sphere, cone_lp,
// stiefel, grassmann, independent_bounded, dlsi.
Setting setting_catalog(const std::string& tag, const CatalogParams& params);
std::vector<std::string> catalog_tags();

struct ConstantRow {
  std::string tag;
  std::string constant;  // "c" or "C"
  std::map<std::string, double> params;
  double stated = 0.0;
  double engine = 0.0;
  bool agrees = false;
};

// Specialized constants stated alongside each setting, next to what the
// general formulas produce for the same parameters.
std::vector<ConstantRow> stated_constant_table();

}  // namespace hoc
