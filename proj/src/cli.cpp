#include <helmlab/cli.hpp>
#include <helmlab/error.hpp>
#include <helmlab/estimlab.hpp>
#include <helmlab/identities.hpp>
#include <helmlab/specfun.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace helmlab::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

const std::set<std::string> kCommands{"verify-identities", "sweep",     "specfun-selftest",
                                      "obstruction",       "bootstrap", "report"};

const std::set<std::string> kToleranceKeys{
    "energy-neumann", "energy-dirichlet", "rellich",   "weighted-energy", "green-duality",
    "mean-value",     "obstruction-slope", "wronskian", "recurrence",      "slope"};

std::string num(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const fs::path &p, const std::string &text)
{
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f)
    throw Error(ErrorKind::Input, "cannot write " + p.string());
  f << text;
}

double tolerance(const RunConfig &c, const std::string &key, double fallback)
{
  auto it = c.tolerances.find(key);
  return it == c.tolerances.end() ? fallback : it->second;
}

json check(const std::string &name, bool pass, double value, double limit)
{
  return json{{"name", name}, {"pass", pass}, {"value", value}, {"limit", limit}};
}

}  // namespace

// Config ----------------------------------------------------------------------

std::string config_to_json(const RunConfig &c)
{
  json j;
  j["command"] = c.command;
  j["estimates"] = c.estimates;
  if (c.grid)
    j["grid"] = json{{"t_min", c.grid->t_min},
                     {"t_max", c.grid->t_max},
                     {"count", c.grid->count},
                     {"rays", c.grid->rays}};
  else
    j["grid"] = nullptr;
  j["modes"] = c.modes;
  j["r_values"] = c.r_values;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["tolerances"] = c.tolerances;
  j["kind"] = c.kind;
  j["k"] = c.k;
  j["artifacts"] = c.artifacts;
  return j.dump(2);
}

namespace
{

RunConfig config_from(const json &j)
{
  if (!j.is_object())
    throw Error(ErrorKind::Input, "config must be a JSON object");
  static const std::set<std::string> keys{"command", "estimates", "grid",      "modes",
                                          "r_values", "output_dir", "seed",     "tolerances",
                                          "kind",     "k",          "artifacts"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key()))
      throw Error(ErrorKind::Input, "unknown config key: " + it.key());
  RunConfig c;
  try
  {
    if (j.contains("command"))
      c.command = j.at("command").get<std::string>();
    if (j.contains("estimates"))
      c.estimates = j.at("estimates").get<std::vector<std::string>>();
    if (j.contains("grid") && !j.at("grid").is_null())
    {
      const json &g = j.at("grid");
      GridSpec s;
      s.t_min = g.value("t_min", s.t_min);
      s.t_max = g.value("t_max", s.t_max);
      s.count = g.value("count", s.count);
      s.rays = g.value("rays", s.rays);
      c.grid = s;
    }
    if (j.contains("modes"))
      c.modes = j.at("modes").get<std::vector<int>>();
    if (j.contains("r_values"))
      c.r_values = j.at("r_values").get<std::vector<double>>();
    if (j.contains("output_dir"))
      c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed"))
      c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances"))
      c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    if (j.contains("kind"))
      c.kind = j.at("kind").get<std::string>();
    if (j.contains("k"))
      c.k = j.at("k").get<int>();
    if (j.contains("artifacts"))
      c.artifacts = j.at("artifacts").get<std::string>();
  }
  catch (const json::exception &e)
  {
    throw Error(ErrorKind::Input, std::string("bad config value: ") + e.what());
  }
  return c;
}

}  // namespace

RunConfig config_from_json(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::exception &e)
  {
    throw Error(ErrorKind::Input, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from(j);
}

void validate(const RunConfig &c)
{
  if (!kCommands.count(c.command))
    throw Error(ErrorKind::Input, "unknown command: " + c.command);
  if (c.grid)
  {
    const GridSpec &g = *c.grid;
    if (!(g.t_min > 0.0) || !(g.t_max > 0.0) || !std::isfinite(g.t_max))
      throw Error(ErrorKind::Input, "lambda grid bounds must be positive", g.t_min);
    if (g.t_max < g.t_min)
      throw Error(ErrorKind::Input, "lambda grid needs t_min <= t_max", g.t_max);
    if (g.count < 1)
      throw Error(ErrorKind::Input, "lambda grid needs count >= 1", g.count);
    if (g.rays.empty())
      throw Error(ErrorKind::Input, "lambda grid needs at least one ray");
    for (double phi : g.rays)
      if (!(std::abs(phi) < std::numbers::pi / 2))
        throw Error(ErrorKind::Input, "rays must satisfy |arg lambda| < pi/2", phi);
  }
  for (const auto &id : c.estimates)
    est::find_spec(id);
  for (int n : c.modes)
    if (std::abs(n) > specfun::kMaxOrder)
      throw Error(ErrorKind::Input, "mode beyond the supported order", n);
  for (const auto &[key, v] : c.tolerances)
  {
    if (!kToleranceKeys.count(key))
      throw Error(ErrorKind::Input, "unknown tolerance key: " + key);
    if (!(v > 0.0))
      throw Error(ErrorKind::Input, "tolerances must be positive: " + key, v);
  }
  if (c.command == "bootstrap" && c.kind != "neumann-complex" && c.kind != "source-energy")
    throw Error(ErrorKind::Input, "bootstrap kind must be neumann-complex or source-energy");
  if (c.command == "report" && c.artifacts.empty())
    throw Error(ErrorKind::Input, "report needs --artifacts");
}

namespace
{

struct HelpRequested
{
  std::string text;
};

}  // namespace

RunConfig parse_command_line(int argc, const char *const *argv)
{
  CLI::App app{"Helmholtz resolvent estimate lab"};
  std::string command, config_path;
  std::vector<std::string> estimates, tols;
  std::optional<double> t_min, t_max;
  std::optional<int> count, k;
  std::vector<double> rays, r_values;
  std::vector<int> modes;
  std::optional<std::string> out, kind, artifacts;
  std::optional<std::uint64_t> seed;

  app.add_option("command", command,
                 "verify-identities | sweep | specfun-selftest | obstruction | bootstrap | report");
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--estimates", estimates, "estimate ids")->delimiter(',');
  app.add_option("--t-min", t_min, "smallest |lambda|");
  app.add_option("--t-max", t_max, "largest |lambda|");
  app.add_option("--count", count, "points per ray");
  app.add_option("--rays", rays, "ray angles arg(lambda)")->delimiter(',');
  app.add_option("--modes", modes, "data modes n of e^{in theta}")->delimiter(',');
  app.add_option("--r", r_values, "parameter values")->delimiter(',');
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "run seed");
  app.add_option("--tol", tols, "tolerance override key=value")->delimiter(',');
  app.add_option("--kind", kind, "bootstrap kind");
  app.add_option("--k", k, "bootstrap index");
  app.add_option("--artifacts", artifacts, "directory of a previous run");
  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &)
  {
    throw HelpRequested{app.help()};
  }
  catch (const CLI::ParseError &e)
  {
    throw Error(ErrorKind::Input, std::string("command line: ") + e.what());
  }

  RunConfig c;
  if (!config_path.empty())
  {
    std::ifstream f(config_path);
    if (!f)
      throw Error(ErrorKind::Input, "cannot read config " + config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    c = config_from_json(ss.str());
  }
  if (!command.empty())
    c.command = command;
  if (!estimates.empty())
    c.estimates = estimates;
  if (t_min || t_max || count || !rays.empty())
  {
    GridSpec g = c.grid.value_or(GridSpec{});
    if (t_min)
      g.t_min = *t_min;
    if (t_max)
      g.t_max = *t_max;
    if (count)
      g.count = *count;
    if (!rays.empty())
      g.rays = rays;
    c.grid = g;
  }
  if (!modes.empty())
    c.modes = modes;
  if (!r_values.empty())
    c.r_values = r_values;
  if (out)
    c.output_dir = *out;
  if (seed)
    c.seed = *seed;
  for (const auto &t : tols)
  {
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Input, "tolerance override must be key=value: " + t);
    try
    {
      c.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    }
    catch (const std::exception &)
    {
      throw Error(ErrorKind::Input, "bad tolerance value: " + t);
    }
  }
  if (kind)
    c.kind = *kind;
  if (k)
    c.k = *k;
  if (artifacts)
    c.artifacts = *artifacts;
  return c;
}

// Self-tests ------------------------------------------------------------------

SelftestResult specfun_selftest()
{
  const std::vector<int> orders{0, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 128};
  const double edge = std::numbers::pi / 2 - 0.05;
  SelftestResult r;
  for (double m : {0.01, 0.1, 0.5, 1.0, 2.0, 3.7, 7.0, 15.0, 30.0, 60.0, 100.0, 250.0, 500.0})
    for (double a : {0.0, 0.4, -0.4, 1.0, -1.0, edge, -edge})
    {
      cplx z = std::polar(m, a);
      for (int n : orders)
      {
        ++r.points;
        r.wronskian = std::max(r.wronskian, specfun::wronskian_residual(n, z));
        if (n > 0)
          r.recurrence = std::max(r.recurrence, specfun::recurrence_residual(n, z));
        // I_n(conj z) / conj(I_n(z)) = 1
        auto a = specfun::bessel_i_scaled(n, z);
        specfun::Scaled conj_a{std::conj(a.mantissa), a.exponent};
        cplx ratio = (specfun::bessel_i_scaled(n, std::conj(z)) / conj_a).value();
        r.conjugation = std::max(r.conjugation, std::abs(ratio - 1.0));
      }
    }
  return r;
}

DtnResult dtn_checks()
{
  DtnResult r;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (double lam : {0.0, 0.5, 3.0, 120.0, 1000.0})
  {
    disk::CircleData f, g;
    for (int n = -40; n <= 40; ++n)
    {
      f.set(n, cplx(nd(rng), nd(rng)));
      g.set(n, cplx(nd(rng), nd(rng)));
    }
    Frequency fr = Frequency::real(lam);
    auto sf = disk::dtn_apply(fr, f), sg = disk::dtn_apply(fr, g);
    cplx a = 0.0, b = 0.0;
    double mag = 0.0;
    for (int n = -40; n <= 40; ++n)
    {
      a += sg.coefficient(n) * std::conj(f.coefficient(n));
      b += g.coefficient(n) * std::conj(sf.coefficient(n));
      mag += std::abs(sg.coefficient(n) * std::conj(f.coefficient(n)));
    }
    r.symmetry = std::max(r.symmetry, std::abs(a - b) / mag);
  }
  std::vector<int> modes;
  for (int n = 0; n <= 128; ++n)
    modes.push_back(n);
  const double edge = std::numbers::pi / 2 - 0.05, q = std::numbers::pi / 4;
  auto real = est::LambdaGrid{1.0, 1000.0, 20, {0.0}}.points();
  auto complex = est::LambdaGrid{1.0, 1000.0, 12, {0.0, q, -q, edge, -edge}}.points();
  r.continuity = std::max({est::dtn_continuity_ratio(real, modes),
                           est::dtn_continuity_ratio(complex, modes),
                           est::dtn_continuity_ratio({Frequency(0.0)}, modes)});
  for (int n = -128; n <= 128; ++n)
    r.steklov_error = std::max(r.steklov_error,
                               std::abs(disk::dtn_symbol(Frequency(0.0), n) - double(std::abs(n))));
  return r;
}

// Commands --------------------------------------------------------------------

namespace
{

struct Outcome
{
  json checks = json::array();
  json extra = json::object();
  std::string text;

  bool all_pass() const
  {
    for (const auto &c : checks)
      if (!c.at("pass").get<bool>())
        return false;
    return true;
  }
};

Outcome cmd_identities(const RunConfig &c, const fs::path &out)
{
  ident::SuiteOptions opt = ident::default_suite();
  for (auto &s : opt.seeds)
    s += c.seed;
  auto reports = ident::identity_suite(opt);
  std::string csv = "id,inputs,lhs_re,lhs_im,rhs_re,rhs_im,residual,tolerance,pass\n";
  std::map<std::string, std::pair<double, double>> worst;  // residual, tolerance
  std::map<std::string, bool> pass;
  std::map<std::string, int> counts;
  for (const auto &r : reports)
  {
    double tol = tolerance(c, r.id, r.tolerance);
    bool ok = r.residual <= tol;
    csv += csv_field(r.id) + "," + csv_field(r.inputs) + "," + num(r.lhs.real()) + "," +
           num(r.lhs.imag()) + "," + num(r.rhs.real()) + "," + num(r.rhs.imag()) + "," +
           num(r.residual) + "," + num(tol) + "," + (ok ? "1" : "0") + "\n";
    auto &w = worst[r.id];
    w.first = std::max(w.first, r.residual);
    w.second = tol;
    pass.emplace(r.id, true);
    pass[r.id] = pass[r.id] && ok;
    ++counts[r.id];
  }
  write_file(out / "identities.csv", csv);
  Outcome o;
  for (const auto &[id, w] : worst)
  {
    json ch = check("identity:" + id, pass[id], w.first, w.second);
    ch["count"] = counts[id];
    o.checks.push_back(ch);
    o.text += id + ": worst residual " + num(w.first) + " (tolerance " + num(w.second) + ") " +
              (pass[id] ? "PASS" : "FAIL") + "\n";
  }
  o.extra["reports"] = reports.size();
  return o;
}

std::vector<est::Datum> sweep_data(const est::EstimateSpec &spec, const RunConfig &c,
                                   const est::GoldenGrid &golden)
{
  if (c.modes.empty() || spec.problem == est::Problem::HalfNeumann ||
      spec.problem == est::Problem::HalfDirichlet)
    return golden.data;
  std::vector<est::Datum> d;
  bool source = spec.problem == est::Problem::NeumannSource ||
                spec.problem == est::Problem::DirichletSource;
  for (int n : c.modes)
  {
    if (spec.regime == est::RegimeKind::Zero && spec.mean_zero_required && n == 0)
      continue;
    d.push_back(source ? est::Datum::source_mode(n) : est::Datum::mode(n));
  }
  return d;
}

std::vector<Frequency> sweep_lambdas(const est::EstimateSpec &spec, const RunConfig &c,
                                     const est::GoldenGrid &golden)
{
  bool half = spec.problem == est::Problem::HalfNeumann || spec.problem == est::Problem::HalfDirichlet;
  if (!c.grid || half || spec.regime == est::RegimeKind::Zero)
    return golden.lambdas;
  std::vector<double> rays = c.grid->rays;
  if (spec.regime == est::RegimeKind::Real)
    rays = {0.0};
  return est::LambdaGrid{c.grid->t_min, c.grid->t_max, c.grid->count, rays}.points();
}

Outcome cmd_sweep(const RunConfig &c, const fs::path &out)
{
  std::vector<const est::EstimateSpec *> specs;
  if (c.estimates.empty())
    for (const auto &s : est::registry())
      specs.push_back(&s);
  else
    for (const auto &id : c.estimates)
      specs.push_back(&est::find_spec(id));

  const bool golden_run = !c.grid && c.modes.empty() && c.r_values.empty();
  const double slope_tol = tolerance(c, "slope", est::kSlopeTol);
  est::Evaluator cache;
  std::string csv = "estimate_id,re_lambda,im_lambda,data_id,r,Q,lhs,rhs\n";
  Outcome o;
  json estimates = json::array();
  for (const auto *spec : specs)
  {
    est::GoldenGrid g = est::golden_grid(*spec, c.seed);
    auto lambdas = sweep_lambdas(*spec, c, g);
    auto data = sweep_data(*spec, c, g);
    auto params = c.r_values.empty() || !spec->param ? g.params : c.r_values;
    est::SweepResult res = golden_run && c.seed == 0
                               ? est::golden_sweep(*spec, 0, &cache)
                               : est::sweep(*spec, lambdas, data, params, &cache);

    std::map<std::string, std::string> plots;
    for (const auto &p : res.points)
    {
      csv += csv_field(spec->id) + "," + num(p.lambda.value().real()) + "," +
             num(p.lambda.value().imag()) + "," + csv_field(p.data_id) + "," + num(p.p) + "," +
             num(p.Q) + "," + num(p.lhs) + "," + num(p.rhs) + "\n";
      std::string series = "# " + p.data_id + " arg=" + num(std::arg(p.lambda.value())) +
                           " r=" + num(p.p);
      std::string &block = plots[series];
      block += num(p.lambda.modulus()) + " " + num(p.Q) + "\n";
    }
    std::string plot;
    for (const auto &[series, block] : plots)
      plot += series + "\n" + block + "\n\n";
    write_file(out / "plots" / (spec->id + ".dat"), plot);

    json fits = json::array();
    bool slopes_ok = true;
    for (const auto &f : res.fits)
    {
      const auto &t = spec->lhs[f.term];
      double delta = f.slope - f.predicted;
      bool enforced = spec->slopes_enforced && f.dominant && f.asymptotic;
      bool ok = !enforced || std::abs(delta) <= slope_tol;
      slopes_ok = slopes_ok && ok;
      fits.push_back(json{{"data_id", f.data_id},
                          {"ray", f.ray},
                          {"r", f.p},
                          {"term", f.term},
                          {"norm", norms::to_string(t.norm)},
                          {"target", est::to_string(t.target)},
                          {"slope", f.slope},
                          {"stderr", f.stderr_},
                          {"predicted", f.predicted},
                          {"delta", delta},
                          {"points", f.count},
                          {"dominant", f.dominant},
                          {"asymptotic", f.asymptotic},
                          {"enforced", enforced},
                          {"pass", ok}});
    }
    json e{{"id", spec->id},
           {"anchor", spec->anchor},
           {"points", res.points.size()},
           {"sup_Q", res.sup_Q},
           {"budget", std::isfinite(res.budget) ? json(res.budget) : json(nullptr)},
           {"golden", res.golden ? json(*res.golden) : json(nullptr)},
           {"pass", res.pass},
           {"fits", fits}};
    if (!spec->note.empty())
      e["note"] = spec->note;
    json flags = json::array();
    for (auto id : spec->surrogate_flags)
      flags.push_back(norms::to_string(id));
    e["surrogates"] = flags;
    estimates.push_back(e);
    o.checks.push_back(check("sweep:" + spec->id, res.pass, res.sup_Q, res.budget));
    if (spec->slopes_enforced)
      o.checks.push_back(check("slopes:" + spec->id, slopes_ok, 0.0, slope_tol));
    o.text += spec->id + ": sup_Q " + num(res.sup_Q) + (res.pass ? " PASS" : " FAIL") + "\n";
  }
  write_file(out / "sweep.csv", csv);
  o.extra["estimates"] = estimates;
  return o;
}

Outcome cmd_selftest(const RunConfig &c, const fs::path &out)
{
  SelftestResult s = specfun_selftest();
  DtnResult d = dtn_checks();
  double wt = tolerance(c, "wronskian", 1e-10), rt = tolerance(c, "recurrence", 1e-9);
  Outcome o;
  o.checks.push_back(check("wronskian", s.wronskian < wt, s.wronskian, wt));
  o.checks.push_back(check("recurrence", s.recurrence < rt, s.recurrence, rt));
  o.checks.push_back(check("conjugation", s.conjugation < 1e-13, s.conjugation, 1e-13));
  o.checks.push_back(check("dtn-symmetry", d.symmetry <= 1e-12, d.symmetry, 1e-12));
  o.checks.push_back(check("dtn-continuity", d.continuity <= 2.0, d.continuity, 2.0));
  o.checks.push_back(check("steklov-symbol", d.steklov_error == 0.0, d.steklov_error, 0.0));
  std::string csv = "check,value,limit,pass\n";
  for (const auto &ch : o.checks)
  {
    csv += ch.at("name").get<std::string>() + "," + num(ch.at("value").get<double>()) + "," +
           num(ch.at("limit").get<double>()) + "," + (ch.at("pass").get<bool>() ? "1" : "0") +
           "\n";
    o.text += ch.at("name").get<std::string>() + ": " + num(ch.at("value").get<double>()) +
              (ch.at("pass").get<bool>() ? " PASS" : " FAIL") + "\n";
  }
  write_file(out / "specfun.csv", csv);
  o.extra["points"] = s.points;
  return o;
}

Outcome cmd_obstruction(const RunConfig &c, const fs::path &out)
{
  disk::CircleData h;
  for (int n : c.modes.empty() ? std::vector<int>{0} : c.modes)
    h.set(n, 1.0);
  std::vector<double> lambdas =
      c.grid ? est::logspace(c.grid->t_min, c.grid->t_max, c.grid->count)
             : est::logspace(0.01, 0.5, 10);
  est::Fit f = est::obstruction_probe(h, lambdas);
  std::string csv = "lambda,l2_norm\n", plot = "# lambda ||u||_L2\n";
  for (double l : lambdas)
  {
    double v = norms::interior_norm(disk::solve_neumann_disk(Frequency::real(l), h),
                                    norms::NormId::L2_Omega);
    csv += num(l) + "," + num(v) + "\n";
    plot += num(l) + " " + num(v) + "\n";
  }
  write_file(out / "obstruction.csv", csv);
  write_file(out / "plots" / "obstruction.dat", plot);
  double tol = tolerance(c, "obstruction-slope", 0.05);
  Outcome o;
  json ch = check("obstruction-slope", std::abs(f.slope + 2.0) <= tol, f.slope, tol);
  ch["expected"] = -2.0;
  ch["stderr"] = f.stderr_;
  o.checks.push_back(ch);
  o.text = "slope " + num(f.slope) + " (expected -2)\n";
  return o;
}

std::string rational_text(const est::Rational &r)
{
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Outcome cmd_bootstrap(const RunConfig &c, const fs::path &out)
{
  auto kind = c.kind == "neumann-complex" ? est::BootstrapKind::NeumannComplex
                                          : est::BootstrapKind::SourceEnergy;
  est::Rational v = est::bootstrap_sequence(kind, c.k);
  int first = kind == est::BootstrapKind::NeumannComplex ? 1 : 0;
  std::string csv = "k,numerator,denominator,value\n";
  json seq = json::array();
  for (int i = first; i <= c.k; ++i)
  {
    auto r = est::bootstrap_sequence(kind, i);
    csv += std::to_string(i) + "," + std::to_string(r.numerator()) + "," +
           std::to_string(r.denominator()) + "," +
           num(double(r.numerator()) / double(r.denominator())) + "\n";
    seq.push_back(rational_text(r));
  }
  write_file(out / "bootstrap.csv", csv);
  Outcome o;
  o.extra["value"] = rational_text(v);
  o.extra["sequence"] = seq;
  o.text = rational_text(v) + "\n";
  return o;
}

json reason(const std::string &code, const std::string &message)
{
  return json{{"code", code}, {"message", message}};
}

}  // namespace

RunResult run(const RunConfig &c)
{
  json summary{{"schema", kSchemaVersion}, {"command", c.command}};
  RunResult res;
  try
  {
    summary["config"] = json::parse(config_to_json(c));
    validate(c);
    if (c.command == "report")
    {
      res.text = render_report(c.artifacts);
      summary["status"] = "pass";
      summary["reason"] = nullptr;
      res.summary = summary.dump(2);
      return res;
    }
    fs::path out = c.output_dir;
    Outcome o;
    if (c.command == "verify-identities")
      o = cmd_identities(c, out);
    else if (c.command == "sweep")
      o = cmd_sweep(c, out);
    else if (c.command == "specfun-selftest")
      o = cmd_selftest(c, out);
    else if (c.command == "obstruction")
      o = cmd_obstruction(c, out);
    else
      o = cmd_bootstrap(c, out);
    bool ok = o.all_pass();
    summary["checks"] = o.checks;
    for (auto it = o.extra.begin(); it != o.extra.end(); ++it)
      summary[it.key()] = it.value();
    summary["status"] = ok ? "pass" : "fail";
    summary["reason"] = ok ? json(nullptr) : reason("check-failed", "one or more checks failed");
    res.exit_code = ok ? kExitOk : kExitCheckFailed;
    res.text = o.text;
    res.summary = summary.dump(2);
    write_file(out / "summary.json", res.summary + "\n");
    return res;
  }
  catch (const Error &e)
  {
    bool accuracy = e.kind() == ErrorKind::Accuracy || e.kind() == ErrorKind::Truncation;
    res.exit_code = accuracy ? kExitAccuracy : kExitConfig;
    summary["status"] = "error";
    summary["reason"] = reason(accuracy ? "numerical-accuracy" : "config", e.what());
    summary["reason"]["error_kind"] = to_string(e.kind());
  }
  catch (const std::exception &e)
  {
    res.exit_code = kExitConfig;
    summary["status"] = "error";
    summary["reason"] = reason("config", e.what());
  }
  res.summary = summary.dump(2);
  if (c.command != "report" && !c.output_dir.empty())
  {
    try
    {
      write_file(fs::path(c.output_dir) / "summary.json", res.summary + "\n");
    }
    catch (const std::exception &)
    {
      // unwritable output directory; the summary still goes to stderr
    }
  }
  return res;
}

// Report ----------------------------------------------------------------------

std::string render_report(const std::string &artifacts_dir)
{
  fs::path p = fs::path(artifacts_dir) / "summary.json";
  std::ifstream f(p);
  if (!f)
    throw Error(ErrorKind::Input, "no run artifacts in " + artifacts_dir);
  json s;
  try
  {
    s = json::parse(f);
  }
  catch (const json::exception &e)
  {
    throw Error(ErrorKind::Input, std::string("unreadable summary: ") + e.what());
  }
  if (s.value("schema", 0) != kSchemaVersion)
    throw Error(ErrorKind::Input, "unsupported summary schema");

  std::ostringstream os;
  char line[256];
  os << "command: " << s.value("command", std::string("?")) << "  status: "
     << s.value("status", std::string("?")) << "\n";
  if (s.contains("reason") && !s["reason"].is_null())
    os << "reason: " << s["reason"].value("code", std::string()) << ": "
       << s["reason"].value("message", std::string()) << "\n";
  if (s.contains("checks"))
  {
    os << "\nchecks\n";
    for (const auto &c : s["checks"])
    {
      bool pass = c.value("pass", false);
      std::snprintf(line, sizeof line, "%s %-44s %-6s value=%.6g limit=%.6g\n", pass ? " " : "!",
                    c.value("name", std::string()).c_str(), pass ? "PASS" : "FAIL",
                    c.value("value", 0.0), c.value("limit", 0.0));
      os << line;
    }
  }
  if (s.contains("estimates"))
  {
    os << "\nestimates\n";
    std::snprintf(line, sizeof line, "  %-42s %-5s %14s %14s %8s\n", "id", "pass", "sup_Q",
                  "golden", "ratio");
    os << line;
    for (const auto &e : s["estimates"])
    {
      double sup = e.value("sup_Q", 0.0);
      bool has_golden = e.contains("golden") && !e["golden"].is_null();
      double g = has_golden ? e["golden"].get<double>() : 0.0;
      bool pass = e.value("pass", false);
      std::snprintf(line, sizeof line, "%s %-42s %-5s %14.8g %14s %8s\n", pass ? " " : "!",
                    e.value("id", std::string()).c_str(), pass ? "PASS" : "FAIL", sup,
                    has_golden ? std::to_string(g).c_str() : "-",
                    has_golden && g > 0 ? std::to_string(sup / g).substr(0, 8).c_str() : "-");
      os << line;
    }
    os << "\nslopes (* dominant term on an asymptotic family, ! failed enforced check)\n";
    std::snprintf(line, sizeof line, "  %-34s %-18s %-7s %-5s %-22s %9s %9s %9s\n", "id",
                  "data", "ray", "r", "term", "slope", "predicted", "delta");
    os << line;
    for (const auto &e : s["estimates"])
      for (const auto &f : e["fits"])
      {
        bool dom = f.value("dominant", false) && f.value("asymptotic", false);
        bool failed = !f.value("pass", true);
        std::string term =
            f.value("norm", std::string()) + "(" + f.value("target", std::string()) + ")";
        std::snprintf(line, sizeof line, "%s %-34s %-18s %-7.3f %-5.2f %-22s %9.4f %9.4f %+9.4f\n",
                      failed ? "!" : dom ? "*" : " ", e.value("id", std::string()).c_str(),
                      f.value("data_id", std::string()).c_str(), f.value("ray", 0.0),
                      f.value("r", 0.0), term.c_str(), f.value("slope", 0.0),
                      f.value("predicted", 0.0), f.value("delta", 0.0));
        os << line;
      }
  }
  if (s.contains("value"))
    os << "\nvalue: " << s["value"].get<std::string>() << "\n";
  return os.str();
}

int main_entry(int argc, const char *const *argv)
{
  RunConfig c;
  try
  {
    c = parse_command_line(argc, argv);
  }
  catch (const HelpRequested &h)
  {
    std::cout << h.text;
    return kExitOk;
  }
  catch (const Error &e)
  {
    json summary{{"schema", kSchemaVersion},
                 {"command", nullptr},
                 {"status", "error"},
                 {"reason", reason("config", e.what())}};
    std::cerr << summary.dump(2) << "\n";
    return kExitConfig;
  }
  RunResult r = run(c);
  std::cout << r.text;
  if (r.exit_code == kExitConfig || r.exit_code == kExitAccuracy)
    std::cerr << r.summary << "\n";
  return r.exit_code;
}

}  // namespace helmlab::cli
