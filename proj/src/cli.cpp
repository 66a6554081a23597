// SPDX-License-Identifier: Apache-2.0
#include "hoc/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hoc/bounds.hpp"
#include "hoc/calculus.hpp"
#include "hoc/discrete.hpp"
#include "hoc/errors.hpp"
#include "hoc/json_io.hpp"
#include "hoc/numeric.hpp"
#include "hoc/samplers.hpp"
#include "hoc/tensor.hpp"
#include "hoc/verify.hpp"

namespace hoc {

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> delta;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

// Result of one command: text to emit plus exit status.
struct Output {
  std::string text;
  bool binary = false;
  int code = kExitOk;
};

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

template <class T>
T cfg(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::string format_of(const Json& c, std::initializer_list<const char*> allowed) {
  const std::string f = cfg<std::string>(c, "format", *allowed.begin());
  for (const char* a : allowed)
    if (f == a) return f;
  throw ConfigError("unsupported format '" + f + "'");
}

double delta_of(const Json& c) {
  const double d = cfg<double>(c, "delta", 0.01);
  if (!(d > 0.0 && d < 1.0)) throw ConfigError("delta must lie in (0,1)");
  return d;
}

std::vector<double> grid_of(const Json& c) {
  if (!c.contains("grid")) throw ConfigError("missing key 'grid'");
  const Json& g = c.at("grid");
  std::vector<double> ts;
  if (g.is_array()) {
    ts = cfg<std::vector<double>>(c, "grid", {});
  } else {
    require_keys(g, {"start", "stop", "step"}, "grid");
    const double a = cfg<double>(g, "start", 0.0);
    const double b = cfg<double>(g, "stop", std::nan(""));
    const double s = cfg<double>(g, "step", std::nan(""));
    if (!(s > 0.0) || !(b >= a)) throw ConfigError("grid needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / s + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError("grid too large");
    for (std::size_t i = 0; i < count; ++i) ts.push_back(a + s * static_cast<double>(i));
  }
  if (ts.empty()) throw ConfigError("grid is empty");
  for (double t : ts)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("grid values must be finite and >= 0");
  return ts;
}

Json with_schema(Json j) {
  j["schema_version"] = kSchemaVersion;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ----- norms -----

Output cmd_norms(const Json& c) {
  require_keys(c, {"tensor", "function", "orders", "points", "q", "restarts", "seed", "format", "out"}, "norms");
  const std::string fmt = format_of(c, {"json", "csv"});
  OpNormOptions opts;
  opts.q = cfg<double>(c, "q", 2.0);
  if (!(opts.q >= 1.0 && opts.q <= 2.0)) throw ConfigError("q must lie in [1,2]");
  opts.restarts = cfg<int>(c, "restarts", 20);
  if (opts.restarts < 1) throw ConfigError("restarts must be >= 1");
  opts.seed = cfg<std::uint64_t>(c, "seed", 0);

  struct Row {
    int point;
    int order;
    double hs, op;
    bool converged;
  };
  std::vector<Row> rows;
  auto measure = [&](const Tensor& t, int point) {
    const OpNormResult r = op_norm(t, opts);
    rows.push_back({point, t.order(), hs_norm(t), r.value, r.converged});
  };
  if (c.contains("tensor") == c.contains("function")) throw ConfigError("give exactly one of 'tensor' or 'function'");
  if (c.contains("tensor")) {
    measure(tensor_from_json(c.at("tensor")), -1);
  } else {
    const PolyFunction f = poly_from_json(c.at("function"));
    const auto orders = cfg<std::vector<int>>(c, "orders", {1});
    const auto points = cfg<std::vector<std::vector<double>>>(c, "points", {});
    if (points.empty()) throw ConfigError("'points' must list at least one point");
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      if (static_cast<int>(points[pi].size()) != f.nvars()) throw ConfigError("point length != nvars");
      const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(points[pi].data(), f.nvars());
      for (int j : orders) {
        if (j < 1) throw ConfigError("orders must be >= 1");
        measure(derivative_tensor(f, j, x).tensor(), static_cast<int>(pi));
      }
    }
  }
  Output o;
  if (fmt == "csv") {
    std::ostringstream s;
    s << "point,order,hs,op,converged\n";
    for (const auto& r : rows)
      s << r.point << ',' << r.order << ',' << format_double(r.hs) << ',' << format_double(r.op) << ','
        << (r.converged ? "true" : "false") << '\n';
    o.text = s.str();
  } else {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back({{"point", r.point}, {"order", r.order}, {"hs", r.hs}, {"op", r.op}, {"converged", r.converged}});
    o.text = dump(with_schema({{"command", "norms"}, {"q", opts.q}, {"rows", arr}}));
  }
  return o;
}

// ----- bound -----

Output cmd_bound(const Json& c) {
  require_keys(c, {"kind", "setting", "levels", "hs", "op", "ew", "a", "b", "sigma2", "grid", "format", "out"},
               "bound");
  const std::string fmt = format_of(c, {"csv", "json"});
  const std::string kind = cfg<std::string>(c, "kind", "tail");
  const std::vector<double> grid = grid_of(c);
  std::function<double(double)> curve;
  Json meta{{"command", "bound"}, {"kind", kind}};
  Setting s;
  if (kind == "tail" || kind == "hw") {
    if (!c.contains("setting")) throw ConfigError("missing key 'setting'");
    s = setting_from_json(c.at("setting"));
    meta["setting"] = to_json(s);
  }
  LevelCoefficients K;
  if (kind == "tail") {
    K.K = cfg<std::vector<double>>(c, "levels", {});
    if (static_cast<int>(K.K.size()) != s.d) throw ConfigError("'levels' must have d entries");
    for (double k : K.K)
      if (!(k >= 0.0)) throw ConfigError("levels must be >= 0");
    meta["levels"] = K.K;
    curve = [&](double t) { return tail_bound(s, K, t); };
  } else if (kind == "hw") {
    const double hs = cfg<double>(c, "hs", -1.0), op = cfg<double>(c, "op", -1.0);
    if (!(hs >= 0.0) || !(op >= 0.0)) throw ConfigError("hw needs hs >= 0 and op >= 0");
    meta["hs"] = hs;
    meta["op"] = op;
    curve = [s, hs, op](double t) { return hw_bound(s, hs, op, t); };
  } else if (kind == "chaos") {
    const auto ew = cfg<std::vector<double>>(c, "ew", {});
    const double a = cfg<double>(c, "a", 0.0), b = cfg<double>(c, "b", 1.0), s2 = cfg<double>(c, "sigma2", 1.0);
    if (ew.empty() || !(b > a) || !(s2 > 0.0)) throw ConfigError("chaos needs ew, b > a, sigma2 > 0");
    meta["ew"] = ew;
    curve = [ew, a, b, s2](double t) { return chaos_sup_bound(ew, a, b, s2, t); };
  } else {
    throw ConfigError("unknown bound kind '" + kind + "'");
  }
  std::vector<double> vals;
  for (double t : grid) vals.push_back(curve(t));
  Output o;
  if (fmt == "csv") {
    std::ostringstream out;
    out << "t,bound\n";
    for (std::size_t i = 0; i < grid.size(); ++i) out << format_double(grid[i]) << ',' << format_double(vals[i]) << '\n';
    o.text = out.str();
  } else {
    Json rows = Json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({{"t", grid[i]}, {"bound", vals[i]}});
    meta["rows"] = rows;
    o.text = dump(with_schema(meta));
  }
  return o;
}

// ----- sample -----

FiniteProductSpace finite_source(const Json& src) {
  if (src.contains("space")) return space_from_json(src.at("space"));
  if (src.contains("ising")) {
    try {
      return ising(ising_from_json(src.at("ising")));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("ising: ") + e.what());
    }
  }
  if (src.contains("rademacher")) return FiniteProductSpace::rademacher(cfg<int>(src, "rademacher", 1));
  throw ConfigError("expected one of 'space', 'ising', 'rademacher'");
}

Output cmd_sample(const Json& c) {
  require_keys(c, {"measure", "space", "ising", "rademacher", "samples", "seed", "format", "out"}, "sample");
  const std::string fmt = format_of(c, {"csv", "json", "binary"});
  const std::size_t count = cfg<std::size_t>(c, "samples", 1000);
  if (count < 1) throw ConfigError("samples must be >= 1");
  const std::uint64_t seed = cfg<std::uint64_t>(c, "seed", 0);
  SampleBatch batch;
  Json desc;
  if (c.contains("measure")) {
    if (c.contains("space") || c.contains("ising") || c.contains("rademacher"))
      throw ConfigError("give either a measure or a finite space");
    const MeasureDescriptor d = measure_from_json(c.at("measure"));
    try {
      batch = sample(d, count, seed);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    desc = {{"kind", d.tag()}, {"n", d.n}, {"k", d.k}, {"p", d.p}};
  } else {
    const FiniteProductSpace space = finite_source(c);
    batch = sample_finite(space, count, seed);
    desc = {{"kind", "finite"}, {"n", space.n()}};
  }
  Output o;
  std::ostringstream s;
  if (fmt == "csv") {
    write_csv(batch, s);
  } else if (fmt == "binary") {
    if (!c.contains("out")) throw ConfigError("binary output needs 'out'");
    write_binary(batch, s);
    o.binary = true;
  } else {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < batch.data.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < batch.data.cols(); ++k) row.push_back(batch.data(r, k));
      rows.push_back(row);
    }
    s << dump(with_schema({{"command", "sample"}, {"measure", desc}, {"seed", seed}, {"rows", batch.data.rows()},
                           {"cols", batch.data.cols()}, {"data", rows}}));
  }
  o.text = s.str();
  return o;
}

// ----- verify -----

double op_of(const Tensor& t, double q, bool& exact) {
  if (!(t.order() == 1 || (t.order() == 2 && q == 2.0))) exact = false;
  OpNormOptions opts;
  opts.q = q;
  return op_norm(t, opts).value;
}

// Levels from iterated differences, computed exactly on the space.
LevelCoefficients exhaustive_levels(const FiniteProductSpace& space, const ValueTable& f, const Setting& s,
                                    bool& exact) {
  const double q = s.q.value_or(2.0);
  LevelCoefficients K;
  for (int j = 1; j <= s.d; ++j) {
    ValueTable v(space.size(), 0.0);
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (space.probability(x) == 0.0) continue;
      v[x] = op_of(h_tensor(f, space, j, x).tensor(), q, exact);
    }
    K.K.push_back(j < s.d ? expectation(v, space) : lr_norm(v, space, std::numeric_limits<double>::infinity()));
  }
  return K;
}

// Levels for a polynomial under a sampled measure: Monte Carlo (inflated by
// three standard errors) below the top level, exact constant tensor at the top.
LevelCoefficients mc_levels(const SampleBatch& batch, const PolyFunction& f, const Setting& s, bool& exact) {
  if (s.d < f.degree()) throw ConfigError("automatic levels need d >= degree of the function");
  const double q = s.q.value_or(2.0);
  LevelCoefficients K;
  for (int j = 1; j <= s.d; ++j) {
    if (j > f.degree()) {
      K.K.push_back(0.0);
    } else if (j == f.degree()) {
      K.K.push_back(op_of(derivative_tensor(f, j, Eigen::VectorXd::Zero(f.nvars())).tensor(), q, exact));
    } else {
      std::vector<double> v(static_cast<std::size_t>(batch.data.rows()));
      for (Eigen::Index r = 0; r < batch.data.rows(); ++r)
        v[static_cast<std::size_t>(r)] = op_of(derivative_tensor(f, j, batch.data.row(r).transpose()).tensor(), q, exact);
      K.K.push_back(mc_estimate(v).inflated);
    }
  }
  return K;
}

Output cmd_verify(const Json& c) {
  require_keys(c,
               {"source", "function", "check", "setting", "levels", "grid", "delta", "samples", "seed", "format",
                "out", "r", "mean", "hs", "op", "sigma2", "budget"},
               "verify");
  const std::string fmt = format_of(c, {"json", "csv"});
  const std::string check = cfg<std::string>(c, "check", "tail");
  const double delta = delta_of(c);
  if (!c.contains("source")) throw ConfigError("missing key 'source'");
  const Json& src = c.at("source");
  require_keys(src, {"measure", "space", "ising", "rademacher"}, "source");
  const bool mc = src.contains("measure");

  Json meta{{"command", "verify"}, {"check", check}};
  std::optional<FiniteProductSpace> space;
  std::optional<SampleBatch> batch;
  if (mc) {
    const MeasureDescriptor d = measure_from_json(src.at("measure"));
    const std::size_t count = cfg<std::size_t>(c, "samples", 100000);
    if (count < 2) throw ConfigError("samples must be >= 2");
    try {
      batch = sample(d, count, cfg<std::uint64_t>(c, "seed", 0));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    meta["measure"] = {{"kind", d.tag()}, {"n", d.n}, {"k", d.k}, {"p", d.p}};
  } else {
    space = finite_source(src);
  }

  if (check == "dlsi") {
    if (mc) throw ConfigError("dlsi check needs a finite source");
    double claimed;
    if (c.contains("sigma2")) {
      claimed = cfg<double>(c, "sigma2", 0.0);
    } else {
      claimed = dlsi_constant(dependence_profile(*space)).sigma2;
    }
    const auto res = verify_dlsi(*space, claimed, cfg<int>(c, "budget", 8), cfg<std::uint64_t>(c, "seed", 0));
    meta["sigma2_claimed"] = claimed;
    meta["max_ratio"] = res.max_ratio;
    meta["pass"] = res.pass;
    Output o;
    o.code = res.pass ? kExitOk : kExitCheckFailed;
    if (fmt == "csv") {
      o.text = "sigma2_claimed,max_ratio,pass\n" + format_double(claimed) + "," + format_double(res.max_ratio) + "," +
               (res.pass ? "true" : "false") + "\n";
    } else {
      o.text = dump(with_schema(meta));
    }
    return o;
  }

  if (!c.contains("function")) throw ConfigError("missing key 'function'");
  const PolyFunction f = poly_from_json(c.at("function"));
  const int nvars = mc ? static_cast<int>(batch->data.cols()) : space->n();
  if (f.nvars() != nvars) throw ConfigError("function nvars does not match the source dimension");
  if (!c.contains("setting")) throw ConfigError("missing key 'setting'");
  const Setting s = setting_from_json(c.at("setting"));
  meta["setting"] = to_json(s);

  ValueTable table;
  double mean = 0.0;
  if (mc) {
    const std::vector<double> vals = evaluate_rows(*batch, [&](const auto& x) { return f.eval(Eigen::VectorXd(x)); });
    mean = c.contains("mean") ? cfg<double>(c, "mean", 0.0) : pairwise_sum(vals) / static_cast<double>(vals.size());
  } else {
    table = tabulate(*space, [&](std::span<const double> x) { return f.eval(x); });
  }
  SampleFunction centered = [&f, mean](const Eigen::Ref<const Eigen::VectorXd>& x) {
    return f.eval(Eigen::VectorXd(x)) - mean;
  };

  bool exact = true;
  LevelCoefficients K;
  const bool need_levels = check == "tail" || check == "moments" || check == "exp_moment";
  if (need_levels) {
    const Json lv = c.contains("levels") ? c.at("levels") : Json("auto");
    if (lv.is_string() && lv.get<std::string>() == "auto") {
      K = mc ? mc_levels(*batch, f, s, exact) : exhaustive_levels(*space, table, s, exact);
    } else {
      K.K = cfg<std::vector<double>>(c, "levels", {});
      if (static_cast<int>(K.K.size()) != s.d) throw ConfigError("'levels' must have d entries");
    }
    meta["levels"] = K.K;
    meta["levels_exact"] = exact;
  }

  Output o;
  std::ostringstream text;
  bool pass = false;
  if (check == "tail" || check == "hw") {
    const std::vector<double> grid = grid_of(c);
    BoundCurve curve;
    if (check == "tail") {
      curve = [&](double t) { return tail_bound(s, K, t); };
    } else {
      double hs, op;
      if (c.contains("hs") || c.contains("op")) {
        hs = cfg<double>(c, "hs", 0.0);
        op = cfg<double>(c, "op", 0.0);
      } else {
        if (f.degree() > 2) throw ConfigError("hw needs hs/op or a function of degree <= 2");
        const Tensor h2 = derivative_tensor(f, 2, Eigen::VectorXd::Zero(f.nvars())).tensor();
        hs = hs_norm(h2);
        op = op_norm(h2).value;
      }
      meta["hs"] = hs;
      meta["op"] = op;
      curve = [s, hs, op](double t) { return hw_bound(s, hs, op, t); };
    }
    const VerificationReport rep = mc ? verify_tail_curve(evaluate_rows(*batch, centered), curve, grid, delta)
                                      : verify_tail_curve(*space, table, curve, grid);
    pass = rep.pass;
    if (fmt == "csv") {
      write_csv(rep, text);
    } else {
      meta["report"] = to_json(rep);
    }
  } else if (check == "moments") {
    std::vector<double> rs = cfg<std::vector<double>>(c, "r", {s.r0});
    for (double r : rs)
      if (!(r >= s.r0)) throw ConfigError("every r must be >= r0");
    const MomentReport rep = mc ? verify_moment_recursion(*batch, centered, s, K, rs)
                                : verify_moment_recursion(*space, table, s, K, rs);
    pass = rep.pass;
    if (fmt == "csv") {
      write_csv(rep, text);
    } else {
      meta["report"] = to_json(rep);
    }
  } else if (check == "exp_moment") {
    if (mc) throw ConfigError("exp_moment check needs a finite source");
    const ExpMomentCertificate cert = exp_moment_certificate(s, K);
    const ExpMomentResult res = verify_exp_moment(*space, table, cert);
    pass = res.pass;
    meta["certificate"] = {{"exponent", cert.exponent}, {"coefficient", cert.coefficient}, {"normalized", cert.normalized}};
    meta["integral"] = res.integral;
    if (fmt == "csv") {
      text << "integral,normalized,pass\n"
           << format_double(res.integral) << ',' << (cert.normalized ? "true" : "false") << ','
           << (res.pass ? "true" : "false") << '\n';
    }
  } else {
    throw ConfigError("unknown check '" + check + "'");
  }
  meta["pass"] = pass;
  o.text = fmt == "csv" ? text.str() : dump(with_schema(meta));
  o.code = pass ? kExitOk : kExitCheckFailed;
  return o;
}

// ----- discrete -----

Json vec_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Output cmd_discrete(const Json& c) {
  require_keys(c, {"space", "ising", "rademacher", "function", "operations", "config", "order", "r", "format", "out"},
               "discrete");
  format_of(c, {"json"});
  const FiniteProductSpace space = finite_source(c);
  const auto ops = cfg<std::vector<std::string>>(c, "operations", {"profile"});
  Json result{{"command", "discrete"}, {"n", space.n()}, {"configurations", space.size()}};

  ValueTable table;
  const bool has_f = c.contains("function");
  if (has_f) {
    const PolyFunction f = poly_from_json(c.at("function"));
    if (f.nvars() != space.n()) throw ConfigError("function nvars != number of coordinates");
    table = tabulate(space, [&](std::span<const double> x) { return f.eval(x); });
  }
  std::size_t x = 0;
  if (c.contains("config")) {
    const auto sym = cfg<std::vector<int>>(c, "config", {});
    try {
      x = space.encode(sym);
    } catch (const ShapeError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  auto need_f = [&](const std::string& op) {
    if (!has_f) throw ConfigError("operation '" + op + "' needs 'function'");
  };
  for (const auto& op : ops) {
    if (op == "profile") {
      const DependenceProfile p = dependence_profile(space);
      Json pj = to_json(p);
      if (p.J_opnorm < 1.0 && p.alpha1 < 1.0) {
        const DlsiConstants k = dlsi_constant(p);
        pj["dlsi_sigma2"] = k.sigma2;
        pj["at_constant"] = k.at_constant;
      }
      pj["dobrushin"] = p.J_opnorm < 1.0;
      result["profile"] = pj;
    } else if (op == "h") {
      need_f(op);
      const HVectors h = h_vectors(table, space, x);
      result["h"] = {{"h", vec_json(h.h)}, {"h_plus", vec_json(h.h_plus)}, {"h_minus", vec_json(h.h_minus)}};
    } else if (op == "h_tensor") {
      need_f(op);
      const int j = cfg<int>(c, "order", 2);
      if (j < 1 || j > space.n()) throw ConfigError("order must satisfy 1 <= order <= n");
      const SymTensor t = h_tensor(table, space, j, x);
      result["h_tensor"] = to_json(t.tensor());
    } else if (op == "d") {
      need_f(op);
      result["d"] = vec_json(d_operator(table, space, x));
    } else if (op == "distribution") {
      need_f(op);
      Json pmf = Json::array();
      for (const auto& [v, p] : exact_distribution(table, space)) pmf.push_back({v, p});
      result["distribution"] = pmf;
    } else if (op == "moments") {
      need_f(op);
      Json rows = Json::array();
      for (double r : cfg<std::vector<double>>(c, "r", {2.0})) {
        if (!(r > 0.0)) throw ConfigError("r must be positive");
        rows.push_back({{"r", r}, {"moment", exact_moment(table, space, r)}});
      }
      result["moments"] = rows;
    } else {
      throw ConfigError("unknown operation '" + op + "'");
    }
  }
  Output o;
  o.text = dump(with_schema(result));
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilevel concentration bounds: norms, tail curves, samplers and checks"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double delta = 0.0;
  std::string out_path, format;
  const char* names[] = {"norms", "bound", "sample", "verify", "discrete"};
  const char* help[] = {"tensor and derivative norms", "tail bound curves", "draw samples", "check bounds",
                        "finite-space operators"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", flags.config, "JSON config file")->required();
    sub->add_option("--seed", seed, "random seed (overrides config)");
    sub->add_option("--samples", samples, "sample count (overrides config)");
    sub->add_option("--delta", delta, "confidence parameter (overrides config)");
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    Json c = load_config(flags.config);
    if (!c.is_object()) throw ConfigError("config must be a JSON object");
    if (sub->count("--seed")) c["seed"] = seed;
    if (sub->count("--samples")) c["samples"] = samples;
    if (sub->count("--delta")) c["delta"] = delta;
    if (sub->count("--out")) c["out"] = out_path;
    if (sub->count("--format")) c["format"] = format;
    // Flags that a command does not use are dropped rather than rejected.
    auto drop_unused = [&](std::initializer_list<const char*> unused) {
      for (const char* k : unused)
        if (sub->count(std::string("--") + k)) c.erase(k);
    };
    Output o;
    if (name == "norms") {
      drop_unused({"samples", "delta"});
      o = cmd_norms(c);
    } else if (name == "bound") {
      drop_unused({"seed", "samples", "delta"});
      o = cmd_bound(c);
    } else if (name == "sample") {
      drop_unused({"delta"});
      o = cmd_sample(c);
    } else if (name == "verify") {
      o = cmd_verify(c);
    } else {
      drop_unused({"seed", "samples", "delta"});
      o = cmd_discrete(c);
    }
    const std::string path = c.contains("out") ? c.at("out").get<std::string>() : "";
    if (path.empty()) {
      out << o.text;
    } else {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw ConfigError("cannot open output '" + path + "'");
      f << o.text;
    }
    return o.code;
  } catch (const DegenerateLevelsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const DobrushinError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace hoc
