// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.

#include <helmlab/cli.hpp>
#include <helmlab/error.hpp>
#include <helmlab/estimlab.hpp>
#include <helmlab/halfspace.hpp>
#include <helmlab/identities.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace helmlab;
namespace fs = std::filesystem;

namespace
{

struct Verdict
{
  bool ok = false;
  std::string detail;
};

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int failures = 0;

void criterion(int id, const char *name, double limit_s, const std::function<Verdict()> &body)
{
  auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try
  {
    v = body();
  }
  catch (const std::exception &e)
  {
    v = {false, std::string("error: ") + e.what()};
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = limit_s <= 0.0 || dt < limit_s;
  bool ok = v.ok && in_time;
  if (!ok)
    ++failures;
  std::printf("%s criterion %2d: %s | %s | %.2f s%s\n", ok ? "PASS" : "FAIL", id, name,
              v.detail.c_str(), dt, in_time ? "" : " (over the time limit)");
  std::fflush(stdout);
}

const std::vector<double> kHalfLambdas{0.5, 1.0, 4.0, 16.0, 64.0};

std::vector<halfspace::LineData> families()
{
  using halfspace::LineData;
  return {LineData::indicator(1.0), LineData::gaussian(1.0), LineData::hermite_gaussian(1, 1.0)};
}

std::string slurp(const fs::path &p)
{
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool same_tree(const fs::path &a, const fs::path &b, std::size_t &files)
{
  for (const auto &e : fs::recursive_directory_iterator(a))
  {
    if (!e.is_regular_file())
      continue;
    auto rel = fs::relative(e.path(), a);
    if (rel.extension() != ".csv" && rel.extension() != ".dat")
      continue;
    ++files;
    if (!fs::exists(b / rel) || slurp(e.path()) != slurp(b / rel))
      return false;
  }
  return files > 0;
}

}  // namespace

int main()
{
  using halfspace::Boundary;
  using halfspace::HalfNorm;

  criterion(1, "half-space Neumann constant 1/sqrt(2)", 5.0, [] {
    const double c = 1.0 / std::sqrt(2.0);
    double worst = 0.0;
    for (double lam : kHalfLambdas)
      for (const auto &d : families())
      {
        auto sol = halfspace::solve_halfspace(Frequency::real(lam), d, Boundary::Neumann);
        double u = std::sqrt(halfspace::closed_form_norm(sol, HalfNorm::L2_Omega));
        double h = std::sqrt(halfspace::closed_form_norm(sol, HalfNorm::data_L2_Gamma));
        worst = std::max(worst, std::pow(lam, 1.5) * u / h);
      }
    auto wide = halfspace::solve_halfspace(Frequency::real(1.0),
                                           halfspace::LineData::gaussian(1000.0), Boundary::Neumann);
    double wide_ratio = std::sqrt(halfspace::closed_form_norm(wide, HalfNorm::L2_Omega) /
                                  halfspace::closed_form_norm(wide, HalfNorm::data_L2_Gamma));
    return Verdict{worst <= c + 1e-9 && wide_ratio >= 0.999 * c,
                   fmt("max ratio %.12f, gaussian(1000) ratio %.12f, bound %.12f", worst,
                       wide_ratio, c)};
  });

  criterion(2, "half-space Dirichlet trace identity", 5.0, [] {
    double worst = 0.0;
    for (double lam : kHalfLambdas)
      for (const auto &d : families())
        worst = std::max(worst, halfspace::trace_identity_check(Frequency::real(lam), d));
    return Verdict{worst < 1e-10, fmt("worst relative residual %.3e (limit 1e-10)", worst)};
  });

  criterion(3, "closed form vs grid oracle", 60.0, [] {
    double worst = 0.0;
    int count = 0;
    for (double lam : kHalfLambdas)
      for (const auto &d : families())
        for (auto bc : {Boundary::Neumann, Boundary::Dirichlet})
        {
          auto sol = halfspace::solve_halfspace(Frequency::real(lam), d, bc);
          auto grid = halfspace::default_grid(sol);
          std::vector<HalfNorm> ids{HalfNorm::L2_Omega,       HalfNorm::grad_L2_Omega,
                                    HalfNorm::trace_L2_Gamma, HalfNorm::trace_tangential_L2_Gamma,
                                    HalfNorm::data_L2_Gamma,  HalfNorm::data_H1_Gamma,
                                    HalfNorm::data_H1_seminorm};
          if (bc == Boundary::Dirichlet)
            ids.push_back(HalfNorm::normal_deriv_L2_Gamma);
          for (auto id : ids)
          {
            double a = halfspace::closed_form_norm(sol, id);
            double b = halfspace::grid_norm_oracle(sol, id, grid);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
            ++count;
          }
        }
    return Verdict{worst < 1e-5, fmt("%g comparisons, worst relative gap %.3e (limit 1e-5)",
                                     count, worst)};
  });

  criterion(4, "identity suite on the 20-seed grid", 120.0, [] {
    auto reports = ident::identity_suite(ident::default_suite());
    std::size_t bad = 0;
    double worst = 0.0;
    for (const auto &r : reports)
    {
      bad += !r.pass;
      worst = std::max(worst, r.residual / r.tolerance);
    }
    return Verdict{bad == 0 && !reports.empty(),
                   fmt("%g reports, %g failed, worst residual/tolerance %.3e",
                       double(reports.size()), double(bad), worst)};
  });

  criterion(5, "real Neumann exponent fits for h = e^{i theta}", 60.0, [] {
    const auto &spec = est::find_spec("neumann-real");
    auto grid = est::LambdaGrid{10.0, 1000.0, 12, {0.0}}.points();
    auto r = est::sweep(spec, grid, {est::Datum::mode(1)}, {0.0});
    double s_l2 = NAN, s_h1 = NAN, s_tr = NAN;
    for (const auto &f : r.fits)
    {
      const auto &t = spec.lhs[f.term];
      if (t.norm == norms::NormId::L2_Omega)
        s_l2 = f.slope;
      else if (t.norm == norms::NormId::H1_Omega)
        s_h1 = f.slope;
      else if (t.norm == norms::NormId::L2_Gamma && t.target == est::Target::Trace)
        s_tr = f.slope;
    }
    bool ok = std::abs(s_l2 + 1.5) <= 0.05 && std::abs(s_h1 + 0.5) <= 0.05 &&
              std::abs(s_tr + 1.0) <= 0.05;
    return Verdict{ok, fmt("slopes L2 %.4f, H1 %.4f, L2(Gamma) %.4f", s_l2, s_h1, s_tr)};
  });

  est::Evaluator cache;
  auto named = [&](const est::NamedGrid &g) {
    auto r = est::named_sweep(g, &cache);
    double golden = r.golden.value_or(NAN);
    bool ok = std::isfinite(r.sup_Q) && r.golden && r.sup_Q <= est::kRegressionFactor * golden &&
              r.sup_Q >= golden / est::kRegressionFactor;
    return Verdict{ok, fmt("sup_Q %.10g, golden %.10g, %g points", r.sup_Q, golden,
                           double(r.points.size()))};
  };

  criterion(6, "real Dirichlet boundedness vs golden", 120.0,
            [&] { return named(est::dirichlet_modes_grid()); });

  criterion(7, "complex Neumann r = 0.45 near the imaginary axis vs golden", 180.0,
            [&] { return named(est::complex_edge_grid()); });

  criterion(8, "bootstrap recursions", 1.0, [] {
    using est::BootstrapKind;
    using est::Rational;
    bool ok = est::bootstrap_sequence(BootstrapKind::NeumannComplex, 1) == Rational(1, 4) &&
              est::bootstrap_sequence(BootstrapKind::NeumannComplex, 2) == Rational(5, 12) &&
              est::bootstrap_sequence(BootstrapKind::NeumannComplex, 3) == Rational(17, 36);
    const Rational expect[] = {Rational(0), Rational(1), Rational(3, 2), Rational(7, 4)};
    for (int k = 0; k < 4; ++k)
    {
      Rational v = est::bootstrap_sequence(BootstrapKind::SourceEnergy, k);
      Rational closed = k == 0 ? Rational(0) : Rational(2) - Rational(1, std::int64_t(1) << (k - 1));
      ok = ok && v == expect[k] && v == closed;
    }
    return Verdict{ok, "1/4, 5/12, 17/36; 0, 1, 3/2, 7/4"};
  });

  criterion(9, "small-lambda obstruction slope", 10.0, [] {
    auto f = est::obstruction_probe(disk::CircleData::mode(0), est::logspace(0.01, 0.5, 10));
    return Verdict{std::abs(f.slope + 2.0) <= 0.05, fmt("slope %.6f (expected -2 +- 0.05)", f.slope)};
  });

  criterion(10, "specfun Wronskian and recurrence", 30.0, [] {
    auto s = cli::specfun_selftest();
    return Verdict{s.wronskian < 1e-10 && s.recurrence < 1e-9,
                   fmt("Wronskian %.3e, recurrence %.3e over %g points", s.wronskian,
                       s.recurrence, double(s.points))};
  });

  criterion(11, "DtN symmetry, continuity and Steklov symbol", 10.0, [] {
    auto d = cli::dtn_checks();
    return Verdict{d.symmetry <= 1e-12 && d.continuity <= 2.0 && d.steklov_error == 0.0,
                   fmt("symmetry %.3e, continuity ratio %.6f, Steklov error %g", d.symmetry,
                       d.continuity, d.steklov_error)};
  });

  criterion(12, "golden suite determinism", 0.0, [] {
    fs::path base = fs::temp_directory_path() / "helmlab-acceptance";
    fs::remove_all(base);
    int codes[2];
    for (int i = 0; i < 2; ++i)
    {
      cli::RunConfig c;
      c.command = "sweep";
      c.seed = 0;
      c.output_dir = (base / ("run" + std::to_string(i))).string();
      codes[i] = cli::run(c).exit_code;
    }
    std::size_t files = 0;
    bool same = same_tree(base / "run0", base / "run1", files);
    return Verdict{same && codes[0] == 0 && codes[1] == 0,
                   fmt("%g files compared, exit codes %g and %g", double(files), codes[0],
                       codes[1])};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
