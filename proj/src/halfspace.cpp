#include <helmlab/halfspace.hpp>

#include <helmlab/error.hpp>
#include <helmlab/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace helmlab::halfspace
{

LineData LineData::indicator(double a)
{
  if (!(a > 0.0))
    throw Error(ErrorKind::Input, "indicator half-width must be positive");
  LineData d;
  d.profile = Profile::Indicator;
  d.a = a;
  return d;
}

LineData LineData::gaussian(double sigma)
{
  if (!(sigma > 0.0))
    throw Error(ErrorKind::Input, "Gaussian width must be positive");
  LineData d;
  d.profile = Profile::Gaussian;
  d.sigma = sigma;
  return d;
}

LineData LineData::hermite_gaussian(int k, double sigma)
{
  if (k < 0 || !(sigma > 0.0))
    throw Error(ErrorKind::Input, "Hermite-Gaussian needs k >= 0 and sigma > 0");
  LineData d;
  d.profile = Profile::HermiteGaussian;
  d.k = k;
  d.sigma = sigma;
  return d;
}

double LineData::hat(double xi) const
{
  switch (profile)
  {
    case Profile::Indicator:
      return std::abs(xi) <= a ? amplitude : 0.0;
    case Profile::Gaussian:
      return amplitude * std::exp(-0.5 * sigma * sigma * xi * xi);
    case Profile::HermiteGaussian:
      return amplitude * std::pow(xi, k) * std::exp(-0.5 * sigma * sigma * xi * xi);
  }
  return 0.0;
}

double LineData::support() const
{
  if (profile == Profile::Indicator)
    return a;
  int kk = profile == Profile::HermiteGaussian ? k : 0;
  return (std::sqrt(2.0 * kk + 4.0) + 10.0) / sigma;
}

double LineData::tail_bound(double x) const
{
  if (profile == Profile::Indicator)
    return x >= a ? 0.0 : INFINITY;
  int kk = profile == Profile::HermiteGaussian ? k : 0;
  // f = (1+xi^2)^2 xi^{2k} e^{-sigma^2 xi^2} decays at least like
  // exp(-(2 sigma^2 x - (2k+4)/x)(xi - x)) beyond x.
  double rate = 2.0 * sigma * sigma * x - (2.0 * kk + 4.0) / x;
  if (rate <= 0.0)
    return INFINITY;
  double f = amplitude * amplitude * std::pow(1.0 + x * x, 2) * std::pow(x, 2 * kk) *
             std::exp(-sigma * sigma * x * x);
  return 2.0 * f / rate;
}

std::string LineData::id() const
{
  std::ostringstream os;
  switch (profile)
  {
    case Profile::Indicator:
      os << "indicator(" << a << ")";
      break;
    case Profile::Gaussian:
      os << "gaussian(" << sigma << ")";
      break;
    case Profile::HermiteGaussian:
      os << "hermite(" << k << "," << sigma << ")";
      break;
  }
  if (amplitude != 1.0)
    os << "*" << amplitude;
  return os.str();
}

const char *to_string(HalfNorm id)
{
  switch (id)
  {
    case HalfNorm::L2_Omega:
      return "L2_Omega";
    case HalfNorm::grad_L2_Omega:
      return "grad_L2_Omega";
    case HalfNorm::trace_L2_Gamma:
      return "trace_L2_Gamma";
    case HalfNorm::trace_tangential_L2_Gamma:
      return "trace_tangential_L2_Gamma";
    case HalfNorm::normal_deriv_L2_Gamma:
      return "normal_deriv_L2_Gamma";
    case HalfNorm::data_L2_Gamma:
      return "data_L2_Gamma";
    case HalfNorm::data_H1_Gamma:
      return "data_H1_Gamma";
    case HalfNorm::data_H1_seminorm:
      return "data_H1_seminorm";
    case HalfNorm::sqrtx2_grad_L2:
      return "sqrtx2_grad_L2";
    case HalfNorm::sqrtx2_hess_L2:
      return "sqrtx2_hess_L2";
  }
  return "unknown";
}

HalfSpaceSolution::HalfSpaceSolution(Frequency lambda, LineData data, Boundary bc)
  : lambda_(lambda), data_(data), bc_(bc)
{
}

cplx HalfSpaceSolution::mu(double xi) const
{
  return std::sqrt(lambda_.squared() + xi * xi);
}

cplx HalfSpaceSolution::multiplier(double xi) const
{
  return bc_ == Boundary::Neumann ? -1.0 / mu(xi) : cplx(1.0);
}

cplx HalfSpaceSolution::spectral(double xi, double x2) const
{
  return multiplier(xi) * std::exp(-x2 * mu(xi)) * data_.hat(xi);
}

HalfSpaceSolution solve_halfspace(const Frequency &lambda, const LineData &data, Boundary bc)
{
  if (lambda.is_zero())
    throw Error(ErrorKind::Regime, "half-space problems need lambda != 0");
  return HalfSpaceSolution(lambda, data, bc);
}

namespace
{

// Kernel K(xi) with squared norm = integral K |hat|^2 d xi.
double kernel(const HalfSpaceSolution &sol, HalfNorm id, double xi)
{
  cplx mu = sol.mu(xi);
  double m2 = std::norm(sol.multiplier(xi));
  double mu2 = std::norm(mu);
  switch (id)
  {
    case HalfNorm::L2_Omega:
      return m2 / (2.0 * mu.real());
    case HalfNorm::grad_L2_Omega:
      return (xi * xi + mu2) * m2 / (2.0 * mu.real());
    case HalfNorm::trace_L2_Gamma:
      return m2;
    case HalfNorm::trace_tangential_L2_Gamma:
      return xi * xi * m2;
    case HalfNorm::normal_deriv_L2_Gamma:
      return mu2 * m2;
    case HalfNorm::data_L2_Gamma:
      return 1.0;
    case HalfNorm::data_H1_Gamma:
      return 1.0 + xi * xi;
    case HalfNorm::data_H1_seminorm:
      return xi * xi;
    default:
      break;
  }
  throw Error(ErrorKind::Capability, std::string("no closed form for ") + to_string(id));
}

std::vector<double> half_line_breaks(double x, double lambda_abs)
{
  std::vector<double> br = {0.0};
  double s = 0.25 * std::min(lambda_abs, x);
  while (s < x)
  {
    br.push_back(s);
    s *= 4.0;
  }
  br.push_back(x);
  return br;
}

void check_norm_id(const HalfSpaceSolution &sol, HalfNorm id)
{
  if (id == HalfNorm::normal_deriv_L2_Gamma && sol.bc() != Boundary::Dirichlet)
    throw Error(ErrorKind::Capability, "normal derivative norm is provided for Dirichlet only");
}

}  // namespace

double closed_form_norm(const HalfSpaceSolution &sol, HalfNorm id)
{
  check_norm_id(sol, id);
  if (id == HalfNorm::sqrtx2_grad_L2 || id == HalfNorm::sqrtx2_hess_L2)
    throw Error(ErrorKind::Capability, "weighted norms are available from the grid oracle only");
  const auto &data = sol.data();
  if (data.amplitude == 0.0)
    return 0.0;
  auto br = half_line_breaks(data.support(), sol.lambda().modulus());
  quad::AdaptiveOptions opt;
  opt.initial_panels = 2;
  double v = quad::integrate_adaptive(
      [&](double xi) {
        double h = data.hat(xi);
        return kernel(sol, id, xi) * h * h;
      },
      br, opt);
  return 2.0 * v;
}

Grid default_grid(const HalfSpaceSolution &sol)
{
  Grid g;
  const double x = sol.data().support();
  const double lam = sol.lambda().modulus();
  g.xi_max = x;
  double width = std::min(0.5 * lam, x / 8.0);
  g.xi_panels = std::clamp(static_cast<int>(std::ceil(2.0 * x / width)), 16, 4096);
  double re_min = sol.mu(0.0).real();
  g.x2_max = 16.0 / re_min;
  double re_max = sol.mu(x).real();
  g.x2_panels = std::max(8, static_cast<int>(std::ceil(std::log2(g.x2_max * re_max))) + 3);
  return g;
}

double grid_norm_oracle(const HalfSpaceSolution &sol, HalfNorm id, const Grid &grid)
{
  check_norm_id(sol, id);
  if (grid.xi_panels < 1 || grid.x2_panels < 1 || !(grid.xi_max > 0.0) || !(grid.x2_max > 0.0))
    throw Error(ErrorKind::Input, "grid must have positive extents and panel counts");
  const auto &data = sol.data();
  if (data.amplitude == 0.0)
    return 0.0;

  std::vector<double> xi_edges(grid.xi_panels + 1);
  for (int j = 0; j <= grid.xi_panels; ++j)
    xi_edges[j] = -grid.xi_max + 2.0 * grid.xi_max * j / grid.xi_panels;
  quad::PanelMesh xi_mesh(xi_edges);

  std::vector<double> x2_edges = {0.0};
  for (int j = grid.x2_panels - 1; j >= 0; --j)
    x2_edges.push_back(grid.x2_max * std::ldexp(1.0, -j));
  quad::PanelMesh x2_mesh(x2_edges);

  // truncation estimates relative to the data norm
  const double re_min = sol.mu(0.0).real();
  const double depth = 2.0 * grid.x2_max * re_min;
  double x2_tail = (1.0 + depth) * std::exp(-depth);
  double data_l2 = 0.0;
  for (std::size_t i = 0; i < xi_mesh.size(); ++i)
  {
    double h = data.hat(xi_mesh.nodes()[i]);
    data_l2 += xi_mesh.weights()[i] * h * h;
  }
  double xi_tail = data.tail_bound(grid.xi_max) / data_l2;
  double bound = std::max(x2_tail, xi_tail);
  if (!(bound <= 1e-6))
    throw Error(ErrorKind::Truncation, "grid truncation bound above 1e-6", bound);

  const bool interior = id == HalfNorm::L2_Omega || id == HalfNorm::grad_L2_Omega ||
                        id == HalfNorm::sqrtx2_grad_L2 || id == HalfNorm::sqrtx2_hess_L2;
  double total = 0.0;
  for (std::size_t i = 0; i < xi_mesh.size(); ++i)
  {
    const double xi = xi_mesh.nodes()[i];
    const double h = data.hat(xi);
    if (h == 0.0)
      continue;
    const cplx mu = sol.mu(xi);
    const cplx m = sol.multiplier(xi);
    const double mu2 = std::norm(mu);
    const double grad_factor = xi * xi + mu2;
    const double boundary2 = std::norm(m * h);
    double acc = 0.0;
    if (interior)
    {
      for (std::size_t j = 0; j < x2_mesh.size(); ++j)
      {
        const double x2 = x2_mesh.nodes()[j];
        double u2 = boundary2 * std::exp(-2.0 * x2 * mu.real());
        double f = 0.0;
        switch (id)
        {
          case HalfNorm::L2_Omega:
            f = u2;
            break;
          case HalfNorm::grad_L2_Omega:
            f = grad_factor * u2;
            break;
          case HalfNorm::sqrtx2_grad_L2:
            f = x2 * grad_factor * u2;
            break;
          default:
            f = x2 * grad_factor * grad_factor * u2;
            break;
        }
        acc += x2_mesh.weights()[j] * f;
      }
    }
    else
    {
      cplx u0 = m * h;
      switch (id)
      {
        case HalfNorm::trace_L2_Gamma:
          acc = std::norm(u0);
          break;
        case HalfNorm::trace_tangential_L2_Gamma:
          acc = xi * xi * std::norm(u0);
          break;
        case HalfNorm::normal_deriv_L2_Gamma:
          acc = std::norm(mu * u0);
          break;
        case HalfNorm::data_L2_Gamma:
          acc = h * h;
          break;
        case HalfNorm::data_H1_Gamma:
          acc = (1.0 + xi * xi) * h * h;
          break;
        default:
          acc = xi * xi * h * h;
          break;
      }
    }
    total += xi_mesh.weights()[i] * acc;
  }
  return total;
}

double trace_identity_check(const Frequency &lambda, const LineData &data)
{
  if (lambda.regime() != Regime::RealNonzero)
    throw Error(ErrorKind::Regime, "trace identity is checked for real nonzero lambda");
  auto sol = solve_halfspace(lambda, data, Boundary::Dirichlet);
  double lhs = closed_form_norm(sol, HalfNorm::normal_deriv_L2_Gamma);
  double rhs = lambda.squared().real() * closed_form_norm(sol, HalfNorm::data_L2_Gamma) +
               closed_form_norm(sol, HalfNorm::data_H1_seminorm);
  if (lhs == 0.0)
    return rhs == 0.0 ? 0.0 : INFINITY;
  return std::abs(lhs - rhs) / lhs;
}

}  // namespace helmlab::halfspace
