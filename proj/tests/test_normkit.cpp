#include <doctest.h>

#include <helmlab/error.hpp>
#include <helmlab/normkit.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace helmlab;
using namespace helmlab::norms;
using disk::CircleData;

namespace
{

const double pi = std::numbers::pi;

disk::DiskSolution mode_fn(int n, std::vector<cplx> poly)
{
  return disk::modal_function({{n, 1.0, disk::polynomial_profile(std::move(poly))}});
}

bool rel_close(double a, double b, double tol)
{
  return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300);
}

}  // namespace

TEST_CASE("linear mode r e^{i theta}")
{
  auto u = mode_fn(1, {0.0, 1.0});
  auto rep = interior_report(u);
  CHECK(rel_close(rep.at(NormId::L2_Omega), std::sqrt(pi / 2), 1e-12));
  CHECK(rel_close(rep.at(NormId::grad_L2_Omega), std::sqrt(2 * pi), 1e-12));
  CHECK(rel_close(rep.at(NormId::H1_Omega), std::sqrt(pi / 2 + 2 * pi), 1e-12));
  CHECK(rep.at(NormId::sqrtd_hess_L2) < 1e-10);
  CHECK(rep.at(NormId::sqrtd_lap_L2) < 1e-10);
  CHECK(rel_close(surrogate_h32(u), std::sqrt(pi / 2 + 2 * pi) + std::sqrt(4 * pi), 1e-12));
  CHECK(rel_close(surrogate_h12(u), std::sqrt(std::sqrt(pi / 2) * std::sqrt(pi / 2 + 2 * pi)),
                  1e-12));
  // d-weighted: 2 pi int (1 - r) r^3 = pi / 10 and 2 pi int (1 - r) 2 r = 2 pi / 3
  CHECK(rel_close(rep.at(NormId::sqrtd_L2_Omega), std::sqrt(pi / 10), 1e-12));
  CHECK(rel_close(rep.at(NormId::sqrtd_grad_L2), std::sqrt(2 * pi / 3), 1e-12));
}

TEST_CASE("constant function")
{
  auto u = disk::modal_function({{0, 1.0, disk::power_profile(0, 1.0)}});
  CHECK(rel_close(surrogate_h32(u), std::sqrt(pi) + std::sqrt(2 * pi), 1e-12));
  CHECK(rel_close(surrogate_h12(u), std::sqrt(pi), 1e-12));
}

TEST_CASE("zero input gives zeros")
{
  disk::DiskSolution zero(Frequency::real(2.0), {});
  auto rep = interior_report(zero);
  for (auto [id, v] : rep.values)
    CHECK(v == 0.0);
  auto b = boundary_report(CircleData(), Frequency::real(2.0), 0.5);
  for (auto [id, v] : b.values)
    CHECK(v == 0.0);
}

TEST_CASE("polynomial Hessian and Laplacian against hand integrals")
{
  // u = r^2 e^{2 i theta} = (x + i y)^2: u_xx = 2, u_yy = -2, u_xy = 2i, |D^2 u|^2 = 16,
  // Laplacian zero. 2 pi int (1 - r) 16 r dr = 16 pi / 3.
  auto u = mode_fn(2, {0.0, 0.0, 1.0});
  auto rep = interior_report(u);
  CHECK(rel_close(rep.at(NormId::sqrtd_hess_L2), std::sqrt(16 * pi / 3), 1e-12));
  CHECK(rep.at(NormId::sqrtd_lap_L2) < 1e-10);
  // u = r^2: Delta u = 4, Hessian = 2 I so |D^2 u|^2 = 8.
  auto v = mode_fn(0, {0.0, 0.0, 1.0});
  auto rv = interior_report(v);
  CHECK(rel_close(rv.at(NormId::sqrtd_lap_L2), std::sqrt(16 * pi / 3), 1e-12));
  CHECK(rel_close(rv.at(NormId::sqrtd_hess_L2), std::sqrt(8 * pi / 3), 1e-12));
}

TEST_CASE("interior norms of a Bessel solution against pointwise cubature")
{
  Frequency lam(cplx(3.0, 2.0));
  CircleData g = CircleData::mode(3, cplx(0.5, -1.0));
  g.set(-1, 2.0);
  auto sol = disk::solve_dirichlet_disk(lam, g);
  auto rep = interior_report(sol);
  // independent polar cubature: GL in r on [0, 1], trapezoid in theta
  auto gl = quad::gauss_legendre(80);
  const int nt = 64;
  double l2 = 0, grad = 0, dlap = 0;
  for (std::size_t i = 0; i < gl.x.size(); ++i)
  {
    double r = 0.5 * (gl.x[i] + 1.0), wr = 0.5 * gl.w[i] * r;
    for (int k = 0; k < nt; ++k)
    {
      double th = 2 * pi * k / nt;
      auto p = sol.evaluate(r, th);
      double w = wr * 2 * pi / nt;
      l2 += w * std::norm(p.u);
      grad += w * (std::norm(p.ur) + std::norm(p.ut) / (r * r));
      dlap += w * (1 - r) * std::norm(p.lap);
    }
  }
  CHECK(rel_close(rep.at(NormId::L2_Omega), std::sqrt(l2), 1e-10));
  CHECK(rel_close(rep.at(NormId::grad_L2_Omega), std::sqrt(grad), 1e-10));
  CHECK(rel_close(rep.at(NormId::sqrtd_lap_L2), std::sqrt(dlap), 1e-10));
  // Delta u = lambda^2 u
  CHECK(rel_close(rep.at(NormId::sqrtd_lap_L2),
                  std::norm(lam.value()) * rep.at(NormId::sqrtd_L2_Omega), 1e-9));
}

TEST_CASE("interior norms at large frequency converge")
{
  Frequency lam = Frequency::ray(400.0, 1.2);
  auto sol = disk::solve_neumann_disk(lam, CircleData::mode(7));
  auto a = interior_report(sol);
  auto b = interior_report(sol, QuadratureControl{1e-10, std::size_t(1) << 20, 3});
  for (auto [id, v] : a.values)
    CHECK(rel_close(v, b.at(id), 1e-9));
  CHECK(a.at(NormId::L2_Omega) <= a.at(NormId::H1_Omega));
  CHECK(a.at(NormId::L2_Gamma) <= a.at(NormId::H1_Gamma));
}

TEST_CASE("boundary norms")
{
  auto g = CircleData::mode(3);
  CHECK(rel_close(boundary_norm(g, 1.0), std::sqrt(20 * pi), 1e-14));
  CHECK(rel_close(boundary_norm(g, 0.0), std::sqrt(2 * pi), 1e-14));
  CHECK(rel_close(boundary_norm(g, -1.0), std::sqrt(2 * pi / 10), 1e-14));
  CHECK_THROWS_AS(boundary_norm(g, 1.6), Error);
  Frequency lam = Frequency::real(4.0);
  CHECK(rel_close(triple_norm(g, lam), 4 * std::sqrt(2 * pi) + std::sqrt(20 * pi), 1e-14));
  CHECK(rel_close(dual_lambda_norm(g, lam), std::sqrt(2 * pi) / (4 + std::sqrt(10.0)), 1e-14));
  CHECK(rel_close(tangential_norm(g), 3 * std::sqrt(2 * pi), 1e-14));
}

TEST_CASE("Parseval against reconstructed trace")
{
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial)
  {
    CircleData g(16);
    for (int n = -16; n <= 16; ++n)
      g.set(n, cplx(nd(rng), nd(rng)) / (1.0 + n * n));
    const int m = 256;
    double acc = 0;
    for (int k = 0; k < m; ++k)
      acc += std::norm(g.evaluate(2 * pi * k / m));
    double quadnorm = std::sqrt(acc * 2 * pi / m);
    CHECK(rel_close(boundary_norm(g, 0.0), quadnorm, 1e-10));
  }
}

TEST_CASE("monotone in s and duality pairing bound")
{
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.1, 200.0);
  for (int trial = 0; trial < 200; ++trial)
  {
    CircleData phi(20), g(20);
    for (int n = -20; n <= 20; ++n)
    {
      if (rng() % 3 == 0)
        phi.set(n, cplx(nd(rng), nd(rng)));
      if (rng() % 3 == 0)
        g.set(n, cplx(nd(rng), nd(rng)));
    }
    Frequency lam = Frequency::ray(ud(rng), 1.5 * (2.0 * (trial % 7) / 6.0 - 1.0));
    double lhs = std::abs(boundary_pairing(phi, g));
    CHECK(lhs <= dual_lambda_norm(phi, lam) * triple_norm(g, lam) * (1 + 1e-9));
    double prev = 0.0;
    for (double s = -1.5; s <= 1.5; s += 0.25)
    {
      double v = boundary_norm(g, s);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("interior and trace comparison for harmonic modes")
{
  // u = r^n e^{i n theta}: |grad u|^2 = 2 pi n, trace H1^2 = 2 pi (1 + n^2)
  for (int n : {1, 2, 5, 20, 60})
  {
    std::vector<cplx> p(n + 1, 0.0);
    p[n] = 1.0;
    auto rep = interior_report(mode_fn(n, p));
    CHECK(rel_close(rep.at(NormId::grad_L2_Omega), std::sqrt(2 * pi * n), 1e-11));
    CHECK(rel_close(rep.at(NormId::L2_Omega), std::sqrt(pi / (n + 1)), 1e-11));
    CHECK(rel_close(rep.at(NormId::H1_Gamma), std::sqrt(2 * pi * (1.0 + n * n)), 1e-14));
  }
}

TEST_CASE("name round trip")
{
  for (auto id : {NormId::L2_Omega, NormId::Hm1lambda_Gamma, NormId::sqrtd_hess_L2})
    CHECK(norm_from_string(to_string(id)) == id);
  CHECK_FALSE(norm_from_string("bogus"));
  auto u = mode_fn(1, {0.0, 1.0});
  CHECK_THROWS_AS(interior_norm(u, NormId::L2_Gamma), Error);
}
