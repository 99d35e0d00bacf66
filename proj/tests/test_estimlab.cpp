#include <doctest.h>

#include <helmlab/error.hpp>
#include <helmlab/estimlab.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace helmlab;
using namespace helmlab::est;
using disk::CircleData;
using norms::NormId;

namespace
{

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(auto &&f)
{
  try
  {
    f();
  }
  catch (const Error &e)
  {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Input;
}

}  // namespace

TEST_CASE("evaluate_estimate examples")
{
  auto line = Datum::line_data(halfspace::LineData::indicator(1.0));
  double q = evaluate_estimate(find_spec("halfspace-neumann-l2"), Frequency::real(1.0), line);
  CHECK(std::abs(q - std::pow(2.0, -0.75)) < 1e-9);
  CHECK(q <= 1.0 / std::sqrt(2.0));

  auto zero = Datum::circle_data("zero", CircleData());
  CHECK(evaluate_estimate(find_spec("neumann-real"), Frequency::real(3.0), zero) == 0.0);

  // Bessel oracle for h = e^{8i theta}, lambda = 10: R = I_8(10 r) / (10 I_8'(10))
  const double lam = 10.0;
  const double d8 = 0.5 * (boost::math::cyl_bessel_i(7, lam) + boost::math::cyl_bessel_i(9, lam));
  auto R = [&](double r) { return boost::math::cyl_bessel_i(8, lam * r) / (lam * d8); };
  double l2 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double r) { return R(r) * R(r) * r; }, 0.0, 1.0, 10, 1e-14);
  Evaluator ev;
  auto e = ev.evaluate(find_spec("neumann-real"), Frequency::real(lam), Datum::mode(8));
  CHECK(std::isfinite(e.Q));
  CHECK(e.Q > 0.0);
  CHECK(std::abs(e.lhs_norms[0] - std::sqrt(2 * kPi * l2)) < 1e-10 * e.lhs_norms[0]);
  CHECK(std::abs(e.lhs_norms[5] - std::sqrt(2 * kPi) * R(1.0)) < 1e-12);
  CHECK(std::abs(e.rhs - std::sqrt(2 * kPi)) < 1e-13);
}

TEST_CASE("admissibility")
{
  const auto &nr = find_spec("neumann-real");
  auto one = Datum::mode(0);
  CHECK(kind_of([&] { evaluate_estimate(nr, Frequency::real(0.05), one); }) == ErrorKind::Regime);
  CHECK(kind_of([&] {
          sweep(nr, {Frequency::real(1.0), Frequency::real(0.05)}, {one}, {0.0});
        }) == ErrorKind::Regime);
  CHECK(std::isfinite(evaluate_estimate(nr, Frequency::real(0.2), one)));
  CHECK(kind_of([&] { evaluate_estimate(nr, Frequency(cplx(1.0, 1.0)), Datum::mode(1)); }) ==
        ErrorKind::Regime);
  CHECK(kind_of([&] { evaluate_estimate(nr, Frequency::real(2.0), Datum::source_mode(1)); }) ==
        ErrorKind::Input);
  CHECK(kind_of([&] {
          evaluate_estimate(find_spec("neumann-complex-r"), Frequency::real(2.0), Datum::mode(1), 0.5);
        }) == ErrorKind::Input);
  CHECK(kind_of([&] {
          evaluate_estimate(find_spec("laplace-neumann-s1"), Frequency(0.0), Datum::mode(0));
        }) == ErrorKind::Regime);
  CHECK(kind_of([&] { find_spec("no-such-estimate"); }) == ErrorKind::Input);
}

TEST_CASE("fit_exponent")
{
  std::vector<std::pair<double, double>> s, c;
  for (double x : logspace(1.0, 100.0, 8))
  {
    s.push_back({x, 5.0 * std::pow(x, -1.5)});
    c.push_back({x, 1.0});
  }
  auto f = fit_exponent(s);
  CHECK(std::abs(f.slope + 1.5) < 1e-13);
  CHECK(f.stderr_ < 1e-12);
  CHECK(std::abs(fit_exponent(c).slope) < 1e-14);

  c[3].second = 0.0;
  CHECK(kind_of([&] { fit_exponent(c); }) == ErrorKind::Input);
  s.resize(5);
  CHECK(kind_of([&] { fit_exponent(s); }) == ErrorKind::Input);
}

TEST_CASE("real Neumann slopes for h = e^{i theta}")
{
  const auto &spec = find_spec("neumann-real");
  std::vector<Frequency> grid;
  for (double t : logspace(10.0, 1000.0, 12))
    grid.push_back(Frequency::real(t));
  auto r = sweep(spec, grid, {Datum::mode(1)}, {0.0});
  auto slope = [&](NormId id) {
    for (const auto &f : r.fits)
      if (spec.lhs[f.term].norm == id && spec.lhs[f.term].target != Target::Trace)
        return f.slope;
    for (const auto &f : r.fits)
      if (spec.lhs[f.term].norm == id)
        return f.slope;
    return std::nan("");
  };
  CHECK(std::abs(slope(NormId::L2_Omega) + 1.5) < 0.05);
  CHECK(std::abs(slope(NormId::H1_Omega) + 0.5) < 0.05);
  CHECK(std::abs(slope(NormId::L2_Gamma) + 1.0) < 0.05);
}

TEST_CASE("bootstrap sequences")
{
  CHECK(bootstrap_sequence(BootstrapKind::NeumannComplex, 1) == Rational(1, 4));
  CHECK(bootstrap_sequence(BootstrapKind::NeumannComplex, 2) == Rational(5, 12));
  CHECK(bootstrap_sequence(BootstrapKind::NeumannComplex, 3) == Rational(17, 36));
  CHECK(bootstrap_sequence(BootstrapKind::NeumannComplex, 30) < Rational(1, 2));
  CHECK(bootstrap_sequence(BootstrapKind::SourceEnergy, 0) == Rational(0));
  CHECK(bootstrap_sequence(BootstrapKind::SourceEnergy, 1) == Rational(1));
  CHECK(bootstrap_sequence(BootstrapKind::SourceEnergy, 2) == Rational(3, 2));
  CHECK(bootstrap_sequence(BootstrapKind::SourceEnergy, 3) == Rational(7, 4));
  CHECK(bootstrap_sequence(BootstrapKind::SourceEnergy, 60) < Rational(2));
  CHECK(kind_of([] { bootstrap_sequence(BootstrapKind::NeumannComplex, 0); }) == ErrorKind::Input);
  CHECK(kind_of([] { bootstrap_sequence(BootstrapKind::SourceEnergy, -1); }) == ErrorKind::Input);
  CHECK(kind_of([] { bootstrap_sequence(BootstrapKind::NeumannComplex, 31); }) == ErrorKind::Input);
}

TEST_CASE("small-lambda obstruction")
{
  auto grid = logspace(0.01, 0.5, 10);
  auto f = obstruction_probe(CircleData::mode(0), grid);
  CHECK(std::abs(f.slope + 2.0) < 0.05);

  CircleData h(8);
  h.set(0, 1.0);
  h.set(1, 1.0);
  CHECK(std::abs(obstruction_probe(h, grid).slope + 2.0) < 0.05);
  CHECK(kind_of([&] { obstruction_probe(CircleData::mode(1), grid); }) == ErrorKind::Precondition);
  CHECK(kind_of([&] { obstruction_probe(CircleData::mode(0), {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}); }) ==
        ErrorKind::Input);
}

TEST_CASE("registry completeness")
{
  std::set<std::string> ids, anchors(anchor_list().begin(), anchor_list().end());
  CHECK(anchors.size() == anchor_list().size());
  std::set<std::string> covered, excluded;
  for (const auto &s : registry())
  {
    CHECK(ids.insert(s.id).second);
    CHECK(!s.lhs.empty());
    CHECK(!s.rhs.empty());
    CHECK(anchors.count(s.anchor) == 1);
    covered.insert(s.anchor);
    std::vector<double> ps = s.param ? s.param->eval : std::vector<double>{0.0};
    for (double p : ps)
    {
      for (const auto &t : s.lhs)
      {
        CHECK(std::isfinite(t.exponent.at(p)));
        CHECK((t.target == Target::Solution || t.target == Target::Trace ||
               t.target == Target::NormalDerivative));
      }
      for (const auto &t : s.rhs)
        CHECK((t.target == Target::Datum || t.target == Target::Source));
    }
  }
  for (const auto &o : out_of_scope())
  {
    CHECK(anchors.count(o.anchor) == 1);
    CHECK(covered.count(o.anchor) == 0);
    CHECK(excluded.insert(o.anchor).second);
  }
  for (const auto &a : anchors)
    CHECK_MESSAGE(covered.count(a) + excluded.count(a) == 1, a);

  for (const char *id :
       {"neumann-real", "dirichlet-real", "neumann-complex-r", "neumann-complex-weighted",
        "source-neumann-real", "source-neumann-complex", "veryweak-neumann-real",
        "veryweak-neumann-complex", "veryweak-neumann-Hs", "source-dirichlet-real",
        "source-dirichlet-complex", "source-dirichlet-weighted", "dirichlet-complex-r",
        "veryweak-dirichlet", "laplace-dirichlet-s12", "laplace-dirichlet-s1",
        "laplace-dirichlet-s32", "laplace-neumann-s12", "laplace-neumann-s1",
        "laplace-neumann-s32", "steklov-bounded"})
    CHECK_MESSAGE(ids.count(id) == 1, id);
  const auto &flags = find_spec("source-dirichlet-weighted-normal").surrogate_flags;
  CHECK(std::find(flags.begin(), flags.end(), NormId::L2_Omega) != flags.end());
}

TEST_CASE("sweep plumbing")
{
  const auto &spec = find_spec("dirichlet-real");
  Frequency lam = Frequency::real(7.0);
  auto d = Datum::mode(3);
  auto r = sweep(spec, {lam}, {d}, {0.0});
  CHECK(r.points.size() == 1);
  CHECK(r.sup_Q == evaluate_estimate(spec, lam, d));
  CHECK(r.fits.empty());
  CHECK(kind_of([&] { sweep(spec, {}, {d}, {0.0}); }) == ErrorKind::Input);
  CHECK(kind_of([&] { sweep(spec, {lam}, {}, {0.0}); }) == ErrorKind::Input);

  // cached and uncached evaluations agree bit for bit
  Evaluator ev;
  auto a = sweep(spec, LambdaGrid{1.0, 100.0, 6, {0.0}}.points(), {d, Datum::random_circle(4)},
                 {0.0}, &ev);
  auto b = sweep(spec, LambdaGrid{1.0, 100.0, 6, {0.0}}.points(), {d, Datum::random_circle(4)},
                 {0.0});
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    CHECK(a.points[i].Q == b.points[i].Q);
  CHECK(a.fits.size() == 2 * spec.lhs.size());
}

TEST_CASE("explicit-constant and lambda = 0 golden sweeps")
{
  for (const auto &s : registry())
  {
    if (s.regime != RegimeKind::Zero && s.problem != Problem::HalfNeumann &&
        s.problem != Problem::HalfDirichlet)
      continue;
    auto r = golden_sweep(s);
    CHECK_MESSAGE(r.pass, s.id);
    CHECK(r.sup_Q >= 0.0);
    if (s.explicit_constant)
      CHECK(r.sup_Q <= *s.explicit_constant + 1e-9);
  }
  // Steklov symbol |n| against the H1 norm (1 + n^2)^{1/2}
  auto r = golden_sweep(find_spec("steklov-bounded"));
  CHECK(std::abs(r.sup_Q - 64.0 / std::sqrt(1.0 + 64.0 * 64.0)) < 1e-12);
}

TEST_CASE("real boundary estimates: exponents and budgets")
{
  Evaluator ev;
  for (const auto &s : registry())
  {
    if (!s.slopes_enforced)
      continue;
    const char *id = s.id.c_str();
    auto r = golden_sweep(s, 0, &ev);
    CHECK_MESSAGE(r.pass, id);
    int checked = 0;
    for (const auto &f : r.fits)
    {
      if (!f.dominant || !f.asymptotic)
        continue;
      ++checked;
      CHECK_MESSAGE(std::abs(f.slope - f.predicted) < kSlopeTol, id, " ", f.data_id);
    }
    CHECK(checked >= 6);
  }
}

TEST_CASE("monotone regime in r")
{
  Evaluator ev;
  auto g = complex_edge_grid();
  const auto &s = find_spec(g.spec_id);
  std::vector<Datum> data{Datum::mode(1), Datum::mode(8)};
  double prev = 0.0;
  for (double r : {0.25, 0.4, 0.45})
  {
    auto res = sweep(s, g.grid.lambdas, data, {r}, &ev);
    CHECK(std::isfinite(res.sup_Q));
    CHECK(res.sup_Q >= prev);
    prev = res.sup_Q;
  }
}

TEST_CASE("sharpness probe tracks the decoupled grid")
{
  auto pts = sharpness_probe(logspace(10.0, 250.0, 8));
  double sup = *golden_value("neumann-real");
  for (const auto &p : pts)
  {
    CHECK(p.Q <= 20.0 * sup);
    CHECK(p.Q >= sup / 20.0);
  }
  CHECK(kind_of([] { sharpness_probe({300.0}); }) == ErrorKind::Input);
}

TEST_CASE("DtN continuity ratio")
{
  std::vector<int> modes;
  for (int n = 0; n <= 64; ++n)
    modes.push_back(n);
  auto real = LambdaGrid{1.0, 1000.0, 20, {0.0}}.points();
  const double edge = kPi / 2 - 0.05;
  auto cplx_grid = LambdaGrid{1.0, 1000.0, 12, {0.0, kPi / 4, -kPi / 4, edge, -edge}}.points();
  CHECK(dtn_continuity_ratio(real, modes) <= 2.0);
  CHECK(dtn_continuity_ratio(cplx_grid, modes) <= 2.0);
  CHECK(dtn_continuity_ratio({Frequency(0.0)}, modes) <= 1.0);
}
