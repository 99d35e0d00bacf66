/// @file test_halfspace.cpp
/// @brief Fourier-multiplier solutions on the half-plane: closed forms, grid
/// oracle, explicit constants and the Dirichlet trace identity.

#include <doctest.h>

#include <helmlab/error.hpp>
#include <helmlab/halfspace.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace helmlab;
using namespace helmlab::halfspace;

namespace
{

const double kSqrtPi = std::sqrt(std::numbers::pi);

std::vector<LineData> families()
{
  return {LineData::indicator(1.0), LineData::gaussian(1.0), LineData::hermite_gaussian(2, 0.7)};
}

const std::vector<double> kLambdas = {0.5, 1.0, 4.0, 16.0, 64.0};

// Composite Simpson rule on [-x, x]; independent of the Gauss-Legendre path.
template <class F>
double simpson(F f, double x, int n)
{
  double h = 2.0 * x / n, s = f(-x) + f(x);
  for (int i = 1; i < n; ++i)
    s += (i % 2 ? 4.0 : 2.0) * f(-x + i * h);
  return s * h / 3.0;
}

double sq(double v) { return v * v; }

}  // namespace

TEST_CASE("multiplier, principal branch and boundary conditions")
{
  auto n = solve_halfspace(Frequency::real(1.0), LineData::indicator(1.0), Boundary::Neumann);
  CHECK(n.multiplier(0.0) == cplx(-1.0));
  auto c = solve_halfspace(Frequency(cplx(1.0, 1.0)), LineData::indicator(1.0), Boundary::Neumann);
  CHECK(std::abs(c.mu(0.0) - cplx(1.0, 1.0)) < 1e-15);
  auto d = solve_halfspace(Frequency::real(2.0), LineData::gaussian(1.0), Boundary::Dirichlet);
  for (double xi : {-3.0, 0.0, 0.4, 2.0})
  {
    CHECK(std::abs(d.spectral(xi, 0.0) - std::exp(-0.5 * xi * xi)) < 1e-15);
    // Neumann: d/dx2 of the transform at 0 equals hat(xi)
    double h = 1e-6;
    auto nn = solve_halfspace(Frequency(cplx(2.0, 0.5)), LineData::gaussian(1.0), Boundary::Neumann);
    cplx deriv = (nn.spectral(xi, h) - nn.spectral(xi, 0.0)) / h;
    CHECK(std::abs(deriv - nn.data().hat(xi)) < 1e-5);
  }
  for (double xi : {0.0, 1.0, 10.0})
  {
    cplx mu = c.mu(xi);
    CHECK(mu.real() > 0.0);
    CHECK(std::abs(mu * mu - (cplx(1.0, 1.0) * cplx(1.0, 1.0) + xi * xi)) < 1e-12);
  }
}

TEST_CASE("lambda = 0 is rejected")
{
  CHECK_THROWS_AS(solve_halfspace(Frequency(), LineData::gaussian(1.0), Boundary::Neumann), Error);
}

TEST_CASE("closed forms against antiderivatives")
{
  auto n1 = solve_halfspace(Frequency::real(1.0), LineData::indicator(1.0), Boundary::Neumann);
  CHECK(closed_form_norm(n1, HalfNorm::L2_Omega) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(closed_form_norm(n1, HalfNorm::data_L2_Gamma) == doctest::Approx(2.0).epsilon(1e-14));

  auto d2 = solve_halfspace(Frequency::real(2.0), LineData::indicator(1.0), Boundary::Dirichlet);
  CHECK(closed_form_norm(d2, HalfNorm::normal_deriv_L2_Gamma) == doctest::Approx(26.0 / 3.0).epsilon(1e-13));

  auto g1 = solve_halfspace(Frequency::real(1.0), LineData::gaussian(1.0), Boundary::Dirichlet);
  CHECK(closed_form_norm(g1, HalfNorm::trace_L2_Gamma) == doctest::Approx(kSqrtPi).epsilon(1e-12));

  for (double lam : kLambdas)
  {
    auto n = solve_halfspace(Frequency::real(lam), LineData::indicator(1.0), Boundary::Neumann);
    // int (l^2 + 2 x^2)(l^2 + x^2)^{-3/2} = 2 asinh(x/l) - x / sqrt(l^2 + x^2)
    double grad = 2.0 * std::asinh(1.0 / lam) - 1.0 / std::sqrt(lam * lam + 1.0);
    CHECK(closed_form_norm(n, HalfNorm::grad_L2_Omega) == doctest::Approx(grad).epsilon(1e-11));
    double l2 = 1.0 / (lam * lam * std::sqrt(lam * lam + 1.0));
    CHECK(closed_form_norm(n, HalfNorm::L2_Omega) == doctest::Approx(l2).epsilon(1e-11));
    // trace: int 1/(l^2 + x^2) = (2/l) atan(1/l)
    CHECK(closed_form_norm(n, HalfNorm::trace_L2_Gamma) ==
          doctest::Approx(2.0 / lam * std::atan(1.0 / lam)).epsilon(1e-11));
    auto d = solve_halfspace(Frequency::real(lam), LineData::indicator(1.0), Boundary::Dirichlet);
    CHECK(closed_form_norm(d, HalfNorm::L2_Omega) == doctest::Approx(std::asinh(1.0 / lam)).epsilon(1e-11));
  }
}

TEST_CASE("complex lambda closed forms against Simpson quadrature")
{
  for (cplx lam : {cplx(1.0, 1.0), cplx(0.3, 4.0), cplx(5.0, -2.0)})
  {
    for (auto bc : {Boundary::Neumann, Boundary::Dirichlet})
    {
      auto sol = solve_halfspace(Frequency(lam), LineData::indicator(1.5), bc);
      auto kernel_l2 = [&](double xi) {
        cplx mu = std::sqrt(lam * lam + xi * xi);
        double m2 = bc == Boundary::Neumann ? 1.0 / std::norm(mu) : 1.0;
        return m2 / (2.0 * mu.real());
      };
      double ref = simpson(kernel_l2, 1.5, 20000);
      CHECK(closed_form_norm(sol, HalfNorm::L2_Omega) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("unsupported norm ids raise capability errors")
{
  auto n = solve_halfspace(Frequency::real(1.0), LineData::indicator(1.0), Boundary::Neumann);
  CHECK_THROWS_AS(closed_form_norm(n, HalfNorm::normal_deriv_L2_Gamma), Error);
  CHECK_THROWS_AS(closed_form_norm(n, HalfNorm::sqrtx2_grad_L2), Error);
}

TEST_CASE("zero data gives zero norms on both paths")
{
  auto data = LineData::gaussian(1.0);
  data.amplitude = 0.0;
  auto sol = solve_halfspace(Frequency::real(1.0), data, Boundary::Neumann);
  CHECK(closed_form_norm(sol, HalfNorm::L2_Omega) == 0.0);
  CHECK(grid_norm_oracle(sol, HalfNorm::L2_Omega, default_grid(sol)) == 0.0);
}

TEST_CASE("explicit Neumann constants")
{
  for (double lam : {0.1, 0.5, 1.0, 4.0, 16.0, 64.0})
  {
    for (const auto &data : families())
    {
      auto sol = solve_halfspace(Frequency::real(lam), data, Boundary::Neumann);
      double h2 = closed_form_norm(sol, HalfNorm::data_L2_Gamma);
      double u2 = closed_form_norm(sol, HalfNorm::L2_Omega);
      CHECK(lam * lam * lam * u2 <= 0.5 * h2 * (1.0 + 1e-12));
      CHECK(closed_form_norm(sol, HalfNorm::grad_L2_Omega) <= h2 / lam * (1.0 + 1e-12));
      double trace = lam * std::sqrt(closed_form_norm(sol, HalfNorm::trace_L2_Gamma)) +
                     std::sqrt(closed_form_norm(sol, HalfNorm::trace_tangential_L2_Gamma));
      CHECK(trace <= 2.0 * std::sqrt(h2));
      auto dsol = solve_halfspace(Frequency::real(lam), data, Boundary::Dirichlet);
      CHECK(lam * closed_form_norm(dsol, HalfNorm::L2_Omega) <= 0.5 * h2 * (1.0 + 1e-12));
    }
  }
  auto sharp = solve_halfspace(Frequency::real(1.0), LineData::gaussian(1e3), Boundary::Neumann);
  double ratio = closed_form_norm(sharp, HalfNorm::L2_Omega) /
                 closed_form_norm(sharp, HalfNorm::data_L2_Gamma);
  CHECK(ratio >= 0.999 * 0.5);
}

TEST_CASE("Dirichlet trace identity")
{
  CHECK(trace_identity_check(Frequency::real(2.0), LineData::indicator(1.0)) < 1e-10);
  CHECK(trace_identity_check(Frequency::real(1.0), LineData::gaussian(1.0)) < 1e-10);
  CHECK(trace_identity_check(Frequency::real(5.0), LineData::hermite_gaussian(1, 1.0)) < 1e-10);
  for (double lam : kLambdas)
    for (const auto &data : families())
      CHECK(trace_identity_check(Frequency::real(lam), data) < 1e-10);
  CHECK_THROWS_AS(trace_identity_check(Frequency(cplx(1.0, 1.0)), LineData::gaussian(1.0)), Error);
}

TEST_CASE("grid oracle agrees with closed forms")
{
  const std::vector<HalfNorm> ids = {HalfNorm::L2_Omega, HalfNorm::grad_L2_Omega,
                                     HalfNorm::trace_L2_Gamma,
                                     HalfNorm::trace_tangential_L2_Gamma,
                                     HalfNorm::data_L2_Gamma, HalfNorm::data_H1_Gamma};
  for (double lam : {0.5, 4.0, 64.0})
  {
    for (const auto &data : families())
    {
      for (auto bc : {Boundary::Neumann, Boundary::Dirichlet})
      {
        auto sol = solve_halfspace(Frequency::real(lam), data, bc);
        auto grid = default_grid(sol);
        auto all = ids;
        if (bc == Boundary::Dirichlet)
          all.push_back(HalfNorm::normal_deriv_L2_Gamma);
        for (auto id : all)
        {
          CAPTURE(to_string(id));
          CAPTURE(lam);
          double a = closed_form_norm(sol, id), b = grid_norm_oracle(sol, id, grid);
          CHECK(std::abs(a - b) <= 1e-5 * a);
        }
      }
    }
  }
}

TEST_CASE("weighted grid norms against the depth-integrated kernel")
{
  // int_0^inf x e^{-2 c x} dx = 1/(4 c^2)
  for (double lam : {1.0, 8.0})
  {
    auto sol = solve_halfspace(Frequency::real(lam), LineData::gaussian(1.0), Boundary::Neumann);
    auto k_grad = [&](double xi) {
      double mu2 = lam * lam + xi * xi;
      double h = std::exp(-0.5 * xi * xi);
      return (xi * xi + mu2) / mu2 * h * h / (4.0 * mu2);
    };
    auto k_hess = [&](double xi) {
      double mu2 = lam * lam + xi * xi;
      double h = std::exp(-0.5 * xi * xi);
      return sq(xi * xi + mu2) / mu2 * h * h / (4.0 * mu2);
    };
    auto grid = default_grid(sol);
    CHECK(grid_norm_oracle(sol, HalfNorm::sqrtx2_grad_L2, grid) ==
          doctest::Approx(simpson(k_grad, 12.0, 20000)).epsilon(1e-8));
    CHECK(grid_norm_oracle(sol, HalfNorm::sqrtx2_hess_L2, grid) ==
          doctest::Approx(simpson(k_hess, 12.0, 20000)).epsilon(1e-8));
  }
}

TEST_CASE("an undersized grid reports its truncation bound")
{
  auto sol = solve_halfspace(Frequency::real(1.0), LineData::gaussian(1.0), Boundary::Neumann);
  Grid g = default_grid(sol);
  g.x2_max = 2.0;
  try
  {
    grid_norm_oracle(sol, HalfNorm::L2_Omega, g);
    CHECK(false);
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::Truncation);
    CHECK(e.value() > 1e-6);
  }
  g = default_grid(sol);
  g.xi_max = 2.0;
  CHECK_THROWS_AS(grid_norm_oracle(sol, HalfNorm::L2_Omega, g), Error);
}
