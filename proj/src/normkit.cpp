#include <helmlab/error.hpp>
#include <helmlab/normkit.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace helmlab::norms
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct NameEntry
{
  NormId id;
  const char *name;
};

constexpr std::array<NameEntry, 17> kNames{{
    {NormId::L2_Omega, "L2_Omega"},
    {NormId::H1_Omega, "H1_Omega"},
    {NormId::grad_L2_Omega, "grad_L2_Omega"},
    {NormId::H12s_Omega, "H12s_Omega"},
    {NormId::H32s_Omega, "H32s_Omega"},
    {NormId::sqrtd_L2_Omega, "sqrtd_L2_Omega"},
    {NormId::sqrtd_grad_L2, "sqrtd_grad_L2"},
    {NormId::sqrtd_hess_L2, "sqrtd_hess_L2"},
    {NormId::sqrtd_lap_L2, "sqrtd_lap_L2"},
    {NormId::L2_Gamma, "L2_Gamma"},
    {NormId::H1_Gamma, "H1_Gamma"},
    {NormId::Hs_Gamma, "Hs_Gamma"},
    {NormId::Hm1_Gamma, "Hm1_Gamma"},
    {NormId::Hm1lambda_Gamma, "Hm1lambda_Gamma"},
    {NormId::triple_H1lambda_Gamma, "triple_H1lambda_Gamma"},
    {NormId::normal_deriv_L2_Gamma, "normal_deriv_L2_Gamma"},
    {NormId::tangential_L2_Gamma, "tangential_L2_Gamma"},
}};

// Integrals plus magnitude companions that bound their roundoff.
struct Accum
{
  RadialIntegrals v;
  double hess_mag = 0.0;
  double lap_mag = 0.0;
  double cross_mag = 0.0;
  double mean_mag = 0.0;
};

Accum integrate_mode(const std::vector<const disk::ModalComponent *> &comps, int n,
                     const quad::PanelMesh &mesh)
{
  const double n2 = double(n) * n;
  std::vector<disk::RadialJet> jets;
  std::vector<disk::RadialJet> sum(mesh.size());
  for (const auto *c : comps)
  {
    c->radial->sample(mesh, jets);
    for (std::size_t i = 0; i < mesh.size(); ++i)
    {
      sum[i].v += c->coefficient * jets[i].v;
      sum[i].d1 += c->coefficient * jets[i].d1;
      sum[i].d2 += c->coefficient * jets[i].d2;
    }
  }
  Accum a;
  for (std::size_t i = 0; i < mesh.size(); ++i)
  {
    double r = mesh.nodes()[i];
    double w = mesh.weights()[i] * r;
    double d = 1.0 - r;
    cplx R = sum[i].v, R1 = sum[i].d1, R2 = sum[i].d2;
    double aR = std::norm(R), aR1 = std::norm(R1), aR2 = std::norm(R2);
    double g = aR1 + n2 * aR / (r * r);
    cplx mixed = R1 / r - R / (r * r);
    cplx radial = R1 / r - n2 * R / (r * r);
    cplx lap = R2 + radial;
    double mag = aR2 + (1.0 + 2.0 * n2) * aR1 / (r * r) + (2.0 * n2 + n2 * n2) * aR / (r * r * r * r);
    a.v.l2 += w * aR;
    a.v.grad += w * g;
    a.v.dl2 += w * d * aR;
    a.v.dgrad += w * d * g;
    a.v.dhess += w * d * (aR2 + 2.0 * n2 * std::norm(mixed) + std::norm(radial));
    a.v.dlap += w * d * std::norm(lap);
    a.v.cross += w * std::conj(R) * R1;
    a.v.mean += w * R;
    a.hess_mag += w * d * mag;
    a.lap_mag += w * d * mag;
    a.cross_mag += w * std::sqrt(aR * aR1);
    a.mean_mag += w * std::sqrt(aR);
  }
  return a;
}

bool close(double a, double b, double tol, double floor)
{
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + 1e-13 * floor;
}

bool close(cplx a, cplx b, double tol, double floor)
{
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + 1e-13 * floor;
}

bool converged(const Accum &x, const Accum &y, double tol)
{
  // derivative integrals of a near-constant profile are pure roundoff; ||R|| sets their floor
  return close(x.v.l2, y.v.l2, tol, 0.0) && close(x.v.grad, y.v.grad, tol, y.v.l2) &&
         close(x.v.dl2, y.v.dl2, tol, 0.0) && close(x.v.dgrad, y.v.dgrad, tol, y.v.dl2) &&
         close(x.v.dhess, y.v.dhess, tol, y.hess_mag + y.v.dl2) &&
         close(x.v.dlap, y.v.dlap, tol, y.lap_mag + y.v.dl2) &&
         close(x.v.cross, y.v.cross, tol, y.cross_mag + y.v.l2) &&
         close(x.v.mean, y.v.mean, tol, y.mean_mag);
}

int max_mode(const disk::DiskSolution &sol)
{
  int m = 0;
  for (const auto &c : sol.components())
    m = std::max(m, std::abs(c.n));
  return std::max(m, disk::kDefaultNmax);
}

}  // namespace

const char *to_string(NormId id)
{
  for (const auto &e : kNames)
    if (e.id == id)
      return e.name;
  return "?";
}

std::optional<NormId> norm_from_string(const std::string &name)
{
  for (const auto &e : kNames)
    if (name == e.name)
      return e.id;
  return std::nullopt;
}

bool is_interior(NormId id)
{
  switch (id)
  {
  case NormId::L2_Omega:
  case NormId::H1_Omega:
  case NormId::grad_L2_Omega:
  case NormId::H12s_Omega:
  case NormId::H32s_Omega:
  case NormId::sqrtd_L2_Omega:
  case NormId::sqrtd_grad_L2:
  case NormId::sqrtd_hess_L2:
  case NormId::sqrtd_lap_L2:
    return true;
  default:
    return false;
  }
}

double NormReport::at(NormId id) const
{
  auto it = values.find(id);
  if (it == values.end())
    throw Error(ErrorKind::Input, std::string("norm not in report: ") + to_string(id));
  return it->second;
}

std::optional<quad::PanelMesh> fixed_mesh(const quad::PanelMesh &base, const QuadratureControl &ctl)
{
  if (ctl.uniform_panels)
    return quad::PanelMesh::uniform(0.0, 1.0, 1.0 / *ctl.uniform_panels, 0);
  if (!ctl.fixed_refinements)
    return std::nullopt;
  quad::PanelMesh mesh = base;
  for (int k = 0; k < *ctl.fixed_refinements; ++k)
    mesh = mesh.refined();
  return mesh;
}

RadialIntegrals mode_integrals(const disk::DiskSolution &sol, int n, const QuadratureControl &ctl)
{
  std::vector<const disk::ModalComponent *> comps;
  for (const auto &c : sol.components())
    if (c.n == n && c.coefficient != cplx(0.0))
      comps.push_back(&c);
  if (comps.empty())
    return {};
  int m = std::abs(n);
  quad::PanelMesh mesh = disk::radial_mesh(sol.lambda(), m);
  if (auto fixed = fixed_mesh(mesh, ctl))
    return integrate_mode(comps, m, *fixed).v;
  Accum prev = integrate_mode(comps, m, mesh);
  while (true)
  {
    mesh = mesh.refined();
    if (mesh.size() > ctl.max_nodes)
      throw Error(ErrorKind::Accuracy, "radial quadrature did not converge for mode " +
                                           std::to_string(n));
    Accum next = integrate_mode(comps, m, mesh);
    if (converged(prev, next, ctl.rel_tol))
      return next.v;
    prev = next;
  }
}

NormReport interior_report(const disk::DiskSolution &sol, const QuadratureControl &ctl)
{
  std::vector<int> modes;
  for (const auto &c : sol.components())
    if (std::find(modes.begin(), modes.end(), c.n) == modes.end())
      modes.push_back(c.n);
  std::sort(modes.begin(), modes.end());

  double l2 = 0, grad = 0, dl2 = 0, dgrad = 0, dhess = 0, dlap = 0;
  for (int n : modes)
  {
    RadialIntegrals I = mode_integrals(sol, n, ctl);
    l2 += I.l2;
    grad += I.grad;
    dl2 += I.dl2;
    dgrad += I.dgrad;
    dhess += I.dhess;
    dlap += I.dlap;
  }
  NormReport rep;
  auto &v = rep.values;
  v[NormId::L2_Omega] = std::sqrt(kTwoPi * l2);
  v[NormId::grad_L2_Omega] = std::sqrt(kTwoPi * grad);
  v[NormId::H1_Omega] = std::sqrt(kTwoPi * (l2 + grad));
  v[NormId::sqrtd_L2_Omega] = std::sqrt(kTwoPi * dl2);
  v[NormId::sqrtd_grad_L2] = std::sqrt(kTwoPi * dgrad);
  v[NormId::sqrtd_hess_L2] = std::sqrt(kTwoPi * dhess);
  v[NormId::sqrtd_lap_L2] = std::sqrt(kTwoPi * dlap);

  int nmax = max_mode(sol);
  disk::CircleData tr = sol.trace(nmax);
  v[NormId::L2_Gamma] = boundary_norm(tr, 0.0);
  v[NormId::H1_Gamma] = boundary_norm(tr, 1.0);
  v[NormId::tangential_L2_Gamma] = tangential_norm(tr);
  v[NormId::normal_deriv_L2_Gamma] = boundary_norm(sol.normal_derivative(nmax), 0.0);
  v[NormId::H12s_Omega] = std::sqrt(v[NormId::L2_Omega] * v[NormId::H1_Omega]);
  v[NormId::H32s_Omega] = v[NormId::H1_Omega] + v[NormId::sqrtd_lap_L2] + v[NormId::H1_Gamma];
  return rep;
}

double interior_norm(const disk::DiskSolution &sol, NormId id)
{
  if (!is_interior(id))
    throw Error(ErrorKind::Input, std::string("not an interior norm: ") + to_string(id));
  return interior_report(sol).at(id);
}

double surrogate_h32(const disk::DiskSolution &sol)
{
  return interior_report(sol).at(NormId::H32s_Omega);
}

double surrogate_h12(const disk::DiskSolution &sol)
{
  return interior_report(sol).at(NormId::H12s_Omega);
}

double boundary_norm(const disk::CircleData &g, double s)
{
  if (!(std::abs(s) <= 1.5))
    throw Error(ErrorKind::Input, "boundary norm order outside [-3/2, 3/2]", s);
  double acc = 0.0;
  for (int n : g.support())
    acc += std::pow(1.0 + double(n) * n, s) * std::norm(g.coefficient(n));
  return std::sqrt(kTwoPi * acc);
}

double tangential_norm(const disk::CircleData &g)
{
  double acc = 0.0;
  for (int n : g.support())
    acc += double(n) * n * std::norm(g.coefficient(n));
  return std::sqrt(kTwoPi * acc);
}

double triple_norm(const disk::CircleData &g, const Frequency &lambda)
{
  return lambda.modulus() * boundary_norm(g, 0.0) + boundary_norm(g, 1.0);
}

double dual_lambda_norm(const disk::CircleData &g, const Frequency &lambda)
{
  double acc = 0.0;
  for (int n : g.support())
  {
    double w = lambda.modulus() + std::sqrt(1.0 + double(n) * n);
    acc += std::norm(g.coefficient(n)) / (w * w);
  }
  return std::sqrt(kTwoPi * acc);
}

cplx boundary_pairing(const disk::CircleData &g, const disk::CircleData &f)
{
  cplx acc = 0.0;
  for (int n : g.support())
    acc += g.coefficient(n) * std::conj(f.coefficient(n));
  return kTwoPi * acc;
}

NormReport boundary_report(const disk::CircleData &g, const Frequency &lambda, double s)
{
  NormReport rep;
  auto &v = rep.values;
  v[NormId::L2_Gamma] = boundary_norm(g, 0.0);
  v[NormId::H1_Gamma] = boundary_norm(g, 1.0);
  v[NormId::Hs_Gamma] = boundary_norm(g, s);
  v[NormId::Hm1_Gamma] = boundary_norm(g, -1.0);
  v[NormId::Hm1lambda_Gamma] = dual_lambda_norm(g, lambda);
  v[NormId::triple_H1lambda_Gamma] = triple_norm(g, lambda);
  v[NormId::tangential_L2_Gamma] = tangential_norm(g);
  return rep;
}

}  // namespace helmlab::norms
