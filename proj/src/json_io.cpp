// SPDX-License-Identifier: Apache-2.0
#include "hoc/json_io.hpp"

#include <algorithm>
#include <ostream>

#include "hoc/errors.hpp"
#include "hoc/numeric.hpp"

namespace hoc {

void require_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

namespace {

template <class T>
T get(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + ": key '" + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> get_opt(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return get<T>(j, key, where);
}

}  // namespace

Json to_json(const Tensor& t) {
  return Json{{"order", t.order()}, {"dim", t.dim()}, {"entries", t.entries()}};
}

Tensor tensor_from_json(const Json& j) {
  require_keys(j, {"order", "dim", "entries"}, "tensor");
  return Tensor(get<int>(j, "order", "tensor"), get<int>(j, "dim", "tensor"),
                get<std::vector<double>>(j, "entries", "tensor"));
}

Json to_json(const PolyFunction& f) {
  Json mons = Json::array();
  for (const auto& [e, c] : f.terms()) mons.push_back({{"exps", e}, {"coef", c}});
  return Json{{"nvars", f.nvars()}, {"monomials", mons}};
}

PolyFunction poly_from_json(const Json& j) {
  require_keys(j, {"nvars", "monomials"}, "function");
  const int n = get<int>(j, "nvars", "function");
  if (n < 0) throw ConfigError("function: nvars must be >= 0");
  std::vector<std::pair<Exponents, double>> mons;
  const Json& arr = j.at("monomials");
  if (!arr.is_array()) throw ConfigError("function: monomials must be an array");
  for (const auto& m : arr) {
    require_keys(m, {"exps", "coef"}, "monomial");
    mons.emplace_back(get<Exponents>(m, "exps", "monomial"), get<double>(m, "coef", "monomial"));
  }
  return PolyFunction(n, mons);
}

Json to_json(const FiniteProductSpace& s) {
  return Json{{"alphabets", s.alphabets()}, {"joint", s.joint()}, {"is_product", s.is_product()}};
}

FiniteProductSpace space_from_json(const Json& j) {
  require_keys(j, {"alphabets", "joint", "is_product", "marginals"}, "space");
  auto alph = get<std::vector<std::vector<double>>>(j, "alphabets", "space");
  if (j.contains("marginals")) {
    if (j.contains("joint")) throw ConfigError("space: give either joint or marginals");
    return FiniteProductSpace::product(std::move(alph), get<std::vector<std::vector<double>>>(j, "marginals", "space"));
  }
  if (!j.contains("joint")) return FiniteProductSpace::uniform(std::move(alph));
  return FiniteProductSpace(std::move(alph), get<std::vector<double>>(j, "joint", "space"),
                            get_opt<bool>(j, "is_product", "space").value_or(false));
}

IsingSpec ising_from_json(const Json& j) {
  require_keys(j, {"n", "edges", "fields", "beta"}, "ising");
  IsingSpec s;
  s.beta = get_opt<double>(j, "beta", "ising").value_or(1.0);
  s.fields = get_opt<std::vector<double>>(j, "fields", "ising").value_or(std::vector<double>{});
  int n = static_cast<int>(s.fields.size());
  if (j.contains("edges")) {
    if (!j.at("edges").is_array()) throw ConfigError("ising: edges must be an array");
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw ConfigError("ising: each edge is [i, j, coupling]");
      IsingEdge edge{e[0].get<int>(), e[1].get<int>(), e[2].get<double>()};
      n = std::max({n, edge.i + 1, edge.j + 1});
      s.edges.push_back(edge);
    }
  }
  s.n = get_opt<int>(j, "n", "ising").value_or(n);
  return s;
}

Json to_json(const Setting& s) {
  Json j{{"tag", s.tag}, {"p", s.p}, {"r0", s.r0}, {"L", s.L}, {"sigma", s.sigma}, {"d", s.d},
         {"positive_part_only", s.positive_part_only}};
  if (s.q) j["q"] = *s.q;
  if (s.gamma) j["gamma"] = *s.gamma;
  return j;
}

Setting setting_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("setting: expected a JSON object");
  const auto tags = catalog_tags();
  const std::string tag = get_opt<std::string>(j, "tag", "setting").value_or("custom");
  Setting s;
  try {
    if (std::find(tags.begin(), tags.end(), tag) != tags.end()) {
      require_keys(j, {"tag", "n", "k", "p", "sigma2", "sigma_q", "d", "gamma", "positive_part_only"}, "setting");
      CatalogParams prm;
      prm.n = get_opt<int>(j, "n", "setting");
      prm.k = get_opt<int>(j, "k", "setting");
      prm.p = get_opt<double>(j, "p", "setting");
      prm.sigma2 = get_opt<double>(j, "sigma2", "setting");
      prm.sigma_q = get_opt<double>(j, "sigma_q", "setting");
      prm.d = get_opt<int>(j, "d", "setting").value_or(1);
      s = setting_catalog(tag, prm);
    } else {
      require_keys(j, {"tag", "p", "r0", "L", "sigma", "d", "q", "gamma", "positive_part_only"}, "setting");
      s.tag = tag;
      s.p = get<double>(j, "p", "setting");
      s.r0 = get<double>(j, "r0", "setting");
      s.L = get<double>(j, "L", "setting");
      s.sigma = get<double>(j, "sigma", "setting");
      s.d = get_opt<int>(j, "d", "setting").value_or(1);
      s.q = get_opt<double>(j, "q", "setting");
    }
    s.gamma = get_opt<double>(j, "gamma", "setting");
    s.positive_part_only = get_opt<bool>(j, "positive_part_only", "setting").value_or(false);
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

Json to_json(const LevelCoefficients& k) { return Json(k.K); }

Json to_json(const DependenceProfile& p) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < p.J.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < p.J.cols(); ++j) row.push_back(p.J(i, j));
    rows.push_back(row);
  }
  return Json{{"J", rows},
              {"beta_tilde", p.beta_tilde},
              {"J_opnorm", p.J_opnorm},
              {"alpha1", p.alpha1},
              {"alpha2", p.alpha2}};
}

Json to_json(const VerificationReport& r) {
  Json points = Json::array();
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    points.push_back({{"t", r.grid[i]},
                      {"empirical", r.empirical_tail[i]},
                      {"ucb", r.empirical_upper_confidence[i]},
                      {"bound", r.theoretical[i]},
                      {"pass", static_cast<bool>(r.verdicts[i])}});
  return Json{{"mode", r.mode == VerifyMode::Exhaustive ? "exhaustive" : "montecarlo"},
              {"pass", r.pass},
              {"sample_count", r.sample_count},
              {"delta", r.delta},
              {"points", points}};
}

Json to_json(const MomentReport& r) {
  Json rows = Json::array();
  for (const auto& m : r.rows)
    rows.push_back({{"r", m.r}, {"moment", m.moment}, {"std_error", m.std_error}, {"bound", m.bound}, {"pass", m.pass}});
  return Json{{"mode", r.mode == VerifyMode::Exhaustive ? "exhaustive" : "montecarlo"}, {"pass", r.pass}, {"rows", rows}};
}

void write_csv(const VerificationReport& r, std::ostream& out) {
  out << "t,empirical,ucb,bound,pass\n";
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    out << format_double(r.grid[i]) << ',' << format_double(r.empirical_tail[i]) << ','
        << format_double(r.empirical_upper_confidence[i]) << ',' << format_double(r.theoretical[i]) << ','
        << (r.verdicts[i] ? "true" : "false") << '\n';
}

void write_csv(const MomentReport& r, std::ostream& out) {
  out << "r,moment,std_error,bound,pass\n";
  for (const auto& m : r.rows)
    out << format_double(m.r) << ',' << format_double(m.moment) << ',' << format_double(m.std_error) << ','
        << format_double(m.bound) << ',' << (m.pass ? "true" : "false") << '\n';
}

MeasureDescriptor measure_from_json(const Json& j) {
  require_keys(j, {"kind", "n", "k", "p"}, "measure");
  const std::string kind = get<std::string>(j, "kind", "measure");
  MeasureDescriptor d;
  d.n = get_opt<int>(j, "n", "measure").value_or(1);
  d.k = get_opt<int>(j, "k", "measure").value_or(0);
  d.p = get_opt<double>(j, "p", "measure").value_or(2.0);
  if (kind == "gaussian") d.kind = MeasureKind::Gaussian;
  else if (kind == "pgen") d.kind = MeasureKind::PGeneralized;
  else if (kind == "sphere") d.kind = MeasureKind::Sphere;
  else if (kind == "cone_lp") d.kind = MeasureKind::ConeLp;
  else if (kind == "stiefel") d.kind = MeasureKind::Stiefel;
  else if (kind == "grassmann") d.kind = MeasureKind::Grassmann;
  else throw ConfigError("measure: unknown kind '" + kind + "'");
  return d;
}

}  // namespace hoc
