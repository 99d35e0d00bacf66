/// @file test_diskmodal.cpp
/// @brief Modal disk solver: homogeneous problems, variation-of-parameters
/// sources, Dirichlet-to-Neumann symbols and the mean value relation.

#include <doctest.h>

#include <helmlab/diskmodal.hpp>
#include <helmlab/error.hpp>
#include <helmlab/specfun.hpp>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace helmlab;
using namespace helmlab::disk;

namespace
{

const double kPi = std::numbers::pi;

ErrorKind kind_of(const std::function<void()> &fn)
{
  try
  {
    fn();
  }
  catch (const Error &e)
  {
    return e.kind();
  }
  return ErrorKind::Config;
}

std::vector<Frequency> frequencies()
{
  return {Frequency::real(0.5),          Frequency::real(10.0),
          Frequency::real(300.0),        Frequency(cplx(1.0, 2.0)),
          Frequency::ray(50.0, 1.5),     Frequency::ray(800.0, -(kPi / 2 - 0.05)),
          Frequency::ray(5.0, kPi / 4)};
}

// manufactured Dirichlet solution r^n (1 - r^2) e^{i n theta}
ModalSource dirichlet_manufactured(int n, cplx lam2)
{
  ModalSource s;
  s.n = n;
  s.coeffs.assign(n + 3, 0.0);
  s.coeffs[n] = lam2 + 4.0 * (n + 1.0);
  s.coeffs[n + 2] = -lam2;
  return s;
}

// manufactured Neumann solution r^n (1 - n/(n+2) r^2) for n >= 1,
// r^2 - r^4/2 for n = 0
ModalSource neumann_manufactured(int n, cplx lam2, std::function<double(double)> &exact)
{
  ModalSource s;
  s.n = n;
  if (n == 0)
  {
    s.coeffs = {-4.0, 0.0, lam2 + 8.0, 0.0, -0.5 * lam2};
    exact = [](double r) { return r * r - 0.5 * std::pow(r, 4); };
    return s;
  }
  double b = double(n) / (n + 2.0);
  s.coeffs.assign(n + 3, 0.0);
  s.coeffs[n] = lam2 + 4.0 * n * (n + 1.0) / (n + 2.0);
  s.coeffs[n + 2] = -b * lam2;
  exact = [n, b](double r) { return std::pow(r, n) * (1.0 - b * r * r); };
  return s;
}

}  // namespace

TEST_CASE("circle data bookkeeping")
{
  auto g = CircleData::mode(3, cplx(2.0, -1.0));
  CHECK(g.coefficient(3) == cplx(2.0, -1.0));
  CHECK(g.coefficient(-3) == cplx(0.0));
  CHECK(g.mean_zero());
  CHECK(g.support() == std::vector<int>{3});
  auto c = CircleData::real_mode(2, 1.0, 0.5);
  CHECK(c.is_real());
  CHECK(std::abs(c.evaluate(0.3) - (std::cos(0.6) + 0.5 * std::sin(0.6))) < 1e-15);
  CHECK(kind_of([&] { g.set(129, 1.0); }) == ErrorKind::Input);
}

TEST_CASE("harmonic and Steklov examples at lambda = 0")
{
  auto u = solve_dirichlet_disk(Frequency(), CircleData::mode(1));
  for (double r : {0.0, 0.3, 1.0})
    CHECK(std::abs(u.u(r, 0.7) - r * std::polar(1.0, 0.7)) < 1e-15);
  auto u5 = solve_dirichlet_disk(Frequency(), CircleData::mode(5));
  CHECK(std::abs(u5.normal_derivative().coefficient(5) - 5.0) < 1e-14);
  auto v = solve_neumann_disk(Frequency(), CircleData::mode(1));
  CHECK(std::abs(v.u(0.4, 1.0) - 0.4 * std::polar(1.0, 1.0)) < 1e-15);
  CHECK(kind_of([] { solve_neumann_disk(Frequency(), CircleData::mode(0)); }) ==
        ErrorKind::Compatibility);
}

TEST_CASE("Dirichlet constant data at lambda = 1")
{
  auto u = solve_dirichlet_disk(Frequency::real(1.0), CircleData::mode(0));
  CHECK(std::abs(u.u(0.0, 0.0) - 0.78984831482511196642) < 1e-14);
  for (double r : {0.2, 0.5, 0.9})
    CHECK(std::abs(u.u(r, 0.0) - boost::math::cyl_bessel_i(0, r) / boost::math::cyl_bessel_i(0, 1.0)) <
          1e-14);
}

TEST_CASE("boundary conditions hold coefficientwise")
{
  for (const auto &lam : frequencies())
  {
    for (int n : {0, 1, 5, 32, 64})
    {
      CircleData g = CircleData::mode(n, cplx(0.3, 1.1));
      auto u = solve_dirichlet_disk(lam, g);
      CHECK(std::abs(u.trace().coefficient(n) - g.coefficient(n)) < 1e-12 * std::abs(g.coefficient(n)));
      auto v = solve_neumann_disk(lam, g);
      CHECK(std::abs(v.normal_derivative().coefficient(n) - g.coefficient(n)) <
            1e-12 * std::abs(g.coefficient(n)));
    }
  }
}

TEST_CASE("homogeneous PDE collocation residual")
{
  for (const auto &lam : frequencies())
  {
    for (int n : {0, 1, 5, 32, 64})
    {
      CAPTURE(lam.value());
      CAPTURE(n);
      CircleData g = CircleData::mode(n, cplx(1.0, -0.5));
      CHECK(pde_residual(solve_dirichlet_disk(lam, g), 7) < 1e-8);
      CHECK(pde_residual(solve_neumann_disk(lam, g), 8) < 1e-8);
    }
  }
}

TEST_CASE("source examples with closed-form solutions")
{
  ModalSource one{0, {1.0}};
  auto w = solve_source_disk(Frequency::real(1.0), one, SourceBc::DirichletZero);
  CHECK(std::abs(w.u(0.0, 0.0) - 0.21015168517488803358) < 1e-12);
  for (double r : {0.1, 0.5, 0.95})
    CHECK(std::abs(w.u(r, 0.0) - (1.0 - boost::math::cyl_bessel_i(0, r) /
                                            boost::math::cyl_bessel_i(0, 1.0))) < 1e-12);
  auto c = solve_source_disk(Frequency::real(3.0), one, SourceBc::NeumannZero);
  for (double r : {0.0, 0.3, 0.77, 1.0})
    CHECK(std::abs(c.u(r, 1.0) - 1.0 / 9.0) < 1e-13);
  ModalSource zero{2, {0.0, 0.0, 0.0}};
  auto z = solve_source_disk(Frequency(cplx(1.0, 1.0)), zero, SourceBc::DirichletZero);
  CHECK(z.u(0.5, 0.2) == cplx(0.0));
}

TEST_CASE("manufactured source solutions")
{
  for (const auto &lam : frequencies())
  {
    for (int n : {0, 1, 3, 8, 14})
    {
      CAPTURE(lam.value());
      CAPTURE(n);
      auto wd = solve_source_disk(lam, dirichlet_manufactured(n, lam.squared()),
                                  SourceBc::DirichletZero);
      std::function<double(double)> exact;
      auto src = neumann_manufactured(n, lam.squared(), exact);
      auto wn = solve_source_disk(lam, src, SourceBc::NeumannZero);
      double worst_d = 0.0, worst_n = 0.0;
      for (double r : {0.05, 0.3, 0.6, 0.9, 0.999, 1.0})
      {
        cplx e = std::polar(1.0, n * 0.4);
        double ed = std::pow(r, n) * (1.0 - r * r);
        worst_d = std::max(worst_d, std::abs(wd.u(r, 0.4) - ed * e));
        worst_n = std::max(worst_n, std::abs(wn.u(r, 0.4) - exact(r) * e));
      }
      CHECK(worst_d < 1e-10);
      CHECK(worst_n < 1e-10);
      CHECK(pde_residual(wd, 3) < 1e-8);
      CHECK(pde_residual(wn, 4) < 1e-8);
    }
  }
}

TEST_CASE("source boundary conditions and sampling consistency")
{
  ModalSource s{2, {0.0, 0.5, 1.0, 0.0, cplx(0.0, 2.0)}};
  for (const auto &lam : frequencies())
  {
    auto wd = solve_source_disk(lam, s, SourceBc::DirichletZero);
    auto wn = solve_source_disk(lam, s, SourceBc::NeumannZero);
    auto jd = wd.components()[0].radial->at(1.0);
    auto jn = wn.components()[0].radial->at(1.0);
    double scale_d = std::abs(wd.components()[0].radial->at(0.9).v) + 1e-300;
    CHECK(std::abs(jd.v) < 1e-12 * std::max(scale_d, std::abs(jd.d1)));
    CHECK(std::abs(jn.d1) < 1e-11 * std::max(std::abs(jn.v), std::abs(jn.d2) / (lam.modulus() + 1)));
    // bulk sampling on a different mesh matches pointwise evaluation
    auto mesh = radial_mesh(lam, 2).refined();
    std::vector<RadialJet> jets;
    wd.components()[0].radial->sample(mesh, jets);
    for (std::size_t i = 0; i < mesh.size(); i += 97)
    {
      auto p = wd.components()[0].radial->at(mesh.nodes()[i]);
      double sc = std::abs(p.v) + std::abs(p.d1) / (lam.modulus() + 1) + 1e-300;
      CHECK(std::abs(p.v - jets[i].v) < 1e-11 * sc);
    }
  }
}

TEST_CASE("source argument checks")
{
  CHECK(kind_of([] { solve_source_disk(Frequency(), ModalSource{0, {1.0}}, SourceBc::DirichletZero); }) ==
        ErrorKind::Capability);
  CHECK(kind_of([] {
          solve_source_disk(Frequency::real(0.05), ModalSource{0, {1.0}}, SourceBc::NeumannZero);
        }) == ErrorKind::Regime);
  // zero weighted mean is admissible below lambda0: f = 1 - 2 r has int f r dr = 1/2 - 2/3 != 0,
  // f = 2 - 3 r has int f r dr = 1 - 1 = 0
  CHECK_NOTHROW(
      solve_source_disk(Frequency::real(0.05), ModalSource{0, {2.0, -3.0}}, SourceBc::NeumannZero));
  ModalSource too_high{0, std::vector<cplx>(18, 1.0)};
  CHECK(kind_of([&] { solve_source_disk(Frequency::real(1.0), too_high, SourceBc::DirichletZero); }) ==
        ErrorKind::Input);
  CHECK(kind_of([] {
          solve_source_disk(Frequency::real(1.0), ModalSource{4, {0.0, 0.0, 1.0}}, SourceBc::DirichletZero);
        }) == ErrorKind::Input);
}

TEST_CASE("Dirichlet-to-Neumann symbols")
{
  auto s = dtn_apply(Frequency(), CircleData::mode(5));
  CHECK(s.coefficient(5) == cplx(5.0));
  CHECK(dtn_apply(Frequency(), CircleData::mode(0, 3.0)).coefficient(0) == cplx(0.0));
  CHECK(std::abs(dtn_symbol(Frequency::real(1.0), 0) - 0.44638996589653450705) < 1e-14);
  for (int n = 0; n <= 128; ++n)
    CHECK(dtn_symbol(Frequency(), n) == cplx(double(n)));
  // symbol equals the normal derivative of the Dirichlet solution
  for (const auto &lam : frequencies())
  {
    auto u = solve_dirichlet_disk(lam, CircleData::mode(7));
    CHECK(std::abs(u.normal_derivative().coefficient(7) - dtn_symbol(lam, 7)) <
          1e-12 * std::abs(dtn_symbol(lam, 7)));
  }
}

TEST_CASE("DtN symmetry for real lambda")
{
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (double lam : {0.0, 0.5, 3.0, 120.0, 1000.0})
  {
    CircleData f, g;
    for (int n = -40; n <= 40; ++n)
    {
      f.set(n, cplx(nd(rng), nd(rng)));
      g.set(n, cplx(nd(rng), nd(rng)));
    }
    Frequency fr = Frequency::real(lam);
    auto sf = dtn_apply(fr, f), sg = dtn_apply(fr, g);
    cplx a = 0.0, b = 0.0;
    double mag = 0.0;
    for (int n = -40; n <= 40; ++n)
    {
      a += sg.coefficient(n) * std::conj(f.coefficient(n));
      b += g.coefficient(n) * std::conj(sf.coefficient(n));
      mag += std::abs(sg.coefficient(n) * std::conj(f.coefficient(n)));
      CHECK(dtn_symbol(fr, n).imag() == 0.0);
    }
    CHECK(std::abs(a - b) <= 1e-12 * mag);
  }
}

TEST_CASE("Steklov norm equivalence on harmonic modes")
{
  for (int n = 1; n <= 128; ++n)
  {
    double dn = std::abs(dtn_symbol(Frequency(), n)) * std::sqrt(2 * kPi);
    double h1 = std::sqrt(2 * kPi * (1.0 + n * n));
    double ratio = dn / h1;
    CHECK(ratio >= 1.0 / std::sqrt(2.0) - 1e-15);
    CHECK(ratio <= 1.0);
  }
}

TEST_CASE("mean value relation")
{
  auto u = solve_neumann_disk(Frequency::real(2.0), CircleData::mode(0, 3.0));
  CHECK(std::abs(disk_integral(u) - 1.5 * kPi) < 1e-12);
  CHECK(mean_value_residual(Frequency::real(2.0), CircleData::mode(0, 3.0)) < 1e-9);
  CHECK(mean_value_residual(Frequency(cplx(1.0, 2.0)), CircleData::mode(0, 1.0)) < 1e-9);
  CHECK(mean_value_residual(Frequency::real(4.0), CircleData::mode(3, 1.0)) == 0.0);
  for (const auto &lam : frequencies())
  {
    CircleData h = CircleData::mode(0, cplx(0.7, 0.2));
    h.set(2, 1.0);
    CHECK(mean_value_residual(lam, h) < 1e-9);
  }
}
