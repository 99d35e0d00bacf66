#pragma once

#include <helmlab/frequency.hpp>

#include <string>
#include <vector>

namespace helmlab::halfspace
{

enum class Profile
{
  Indicator,
  Gaussian,
  HermiteGaussian
};

// Boundary datum on the line x2 = 0, given by its unitary Fourier transform.
struct LineData
{
  Profile profile = Profile::Gaussian;
  double a = 1.0;      // Indicator half-width
  double sigma = 1.0;  // Gaussian width parameter
  int k = 0;           // Hermite-Gaussian power
  double amplitude = 1.0;

  static LineData indicator(double a);
  static LineData gaussian(double sigma);
  static LineData hermite_gaussian(int k, double sigma);

  double hat(double xi) const;
  // Half-width beyond which |hat|^2 (times up to xi^4) is negligible.
  double support() const;
  // Bound on the integral of (1 + xi^2)^2 |hat|^2 over |xi| > x.
  double tail_bound(double x) const;
  std::string id() const;
};

enum class Boundary
{
  Neumann,
  Dirichlet
};

enum class HalfNorm
{
  L2_Omega,
  grad_L2_Omega,
  trace_L2_Gamma,
  trace_tangential_L2_Gamma,
  normal_deriv_L2_Gamma,
  data_L2_Gamma,
  data_H1_Gamma,
  data_H1_seminorm,
  // grid oracle only: x2-weighted gradient and Hessian
  sqrtx2_grad_L2,
  sqrtx2_hess_L2
};

const char *to_string(HalfNorm id);

class HalfSpaceSolution
{
public:
  HalfSpaceSolution(Frequency lambda, LineData data, Boundary bc);

  const Frequency &lambda() const { return lambda_; }
  const LineData &data() const { return data_; }
  Boundary bc() const { return bc_; }

  // principal sqrt(lambda^2 + xi^2)
  cplx mu(double xi) const;
  cplx multiplier(double xi) const;
  // Fourier transform in x1 of u at depth x2
  cplx spectral(double xi, double x2) const;

private:
  Frequency lambda_;
  LineData data_;
  Boundary bc_;
};

HalfSpaceSolution solve_halfspace(const Frequency &lambda, const LineData &data, Boundary bc);

// Squared norm from the one-dimensional spectral integral.
double closed_form_norm(const HalfSpaceSolution &sol, HalfNorm id);

struct Grid
{
  double xi_max = 0.0;
  int xi_panels = 0;
  double x2_max = 0.0;
  int x2_panels = 0;  // geometric panels toward x2 = 0
};

Grid default_grid(const HalfSpaceSolution &sol);

// Squared norm from tensor (xi, x2) quadrature of the sampled transform.
double grid_norm_oracle(const HalfSpaceSolution &sol, HalfNorm id, const Grid &grid);

// | ||d2 u||^2 - (lambda^2 ||g||^2 + |g|_{H1}^2) | / ||d2 u||^2 for Dirichlet data
double trace_identity_check(const Frequency &lambda, const LineData &data);

}  // namespace helmlab::halfspace
