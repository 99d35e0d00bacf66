#include <helmlab/error.hpp>
#include <helmlab/identities.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace helmlab::ident
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

IdentityReport make(std::string id, std::string inputs, cplx lhs, cplx rhs, double tol)
{
  IdentityReport r;
  r.id = std::move(id);
  r.inputs = std::move(inputs);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = relative_residual(lhs, rhs);
  r.tolerance = tol;
  r.pass = r.residual <= tol;
  return r;
}

std::string describe(const disk::DiskSolution &sol)
{
  std::ostringstream os;
  os.precision(17);
  os << "lambda=" << sol.lambda().value().real() << "+" << sol.lambda().value().imag() << "i modes=";
  std::vector<int> ns;
  for (const auto &c : sol.components())
    ns.push_back(c.n);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (std::size_t i = 0; i < ns.size(); ++i)
    os << (i ? "," : "") << ns[i];
  return os.str();
}

std::vector<int> modes_of(const disk::DiskSolution &sol)
{
  std::vector<int> ns;
  for (const auto &c : sol.components())
    ns.push_back(c.n);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  return ns;
}

int nmax_of(const disk::DiskSolution &sol)
{
  int m = disk::kDefaultNmax;
  for (const auto &c : sol.components())
    m = std::max(m, std::abs(c.n));
  return m;
}

// Bilinear int_0^1 R(r) f(r) r dr for the components of u on mode n.
cplx radial_product(const disk::DiskSolution &u, int n, const disk::ModalSource &F,
                    const norms::QuadratureControl &ctl)
{
  std::vector<const disk::ModalComponent *> comps;
  for (const auto &c : u.components())
    if (c.n == n)
      comps.push_back(&c);
  if (comps.empty())
    return 0.0;
  quad::PanelMesh mesh = disk::radial_mesh(u.lambda(), std::abs(n));
  std::vector<disk::RadialJet> jets;
  auto integrate = [&](const quad::PanelMesh &m, double &mag) {
    std::vector<cplx> R(m.size(), 0.0);
    for (const auto *c : comps)
    {
      c->radial->sample(m, jets);
      for (std::size_t i = 0; i < m.size(); ++i)
        R[i] += c->coefficient * jets[i].v;
    }
    cplx acc = 0.0;
    mag = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
    {
      double r = m.nodes()[i];
      cplx t = R[i] * F.f(r) * (m.weights()[i] * r);
      acc += t;
      mag += std::abs(t);
    }
    return acc;
  };
  if (auto fixed = norms::fixed_mesh(mesh, ctl))
  {
    double mag;
    return integrate(*fixed, mag);
  }
  double mag;
  cplx prev = integrate(mesh, mag);
  while (true)
  {
    mesh = mesh.refined();
    if (mesh.size() > ctl.max_nodes)
      throw Error(ErrorKind::Accuracy, "bilinear radial quadrature did not converge");
    cplx next = integrate(mesh, mag);
    if (std::abs(next - prev) <= ctl.rel_tol * std::abs(next) + 1e-14 * mag)
      return next;
    prev = next;
  }
}

}  // namespace

double relative_residual(cplx lhs, cplx rhs)
{
  double den = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / den;
}

IdentityReport energy_identity(const disk::DiskSolution &sol, const disk::CircleData &data, Bc bc,
                               const norms::QuadratureControl &ctl)
{
  const cplx lam2 = sol.lambda().squared();
  cplx lhs = 0.0;
  for (int n : modes_of(sol))
  {
    auto I = norms::mode_integrals(sol, n, ctl);
    lhs += lam2 * I.l2 + I.grad;
  }
  lhs *= kTwoPi;
  int nmax = std::max(nmax_of(sol), data.n_max());
  cplx rhs = bc == Bc::Neumann ? norms::boundary_pairing(data, sol.trace(nmax))
                               : norms::boundary_pairing(sol.normal_derivative(nmax), data);
  return make(bc == Bc::Neumann ? "energy-neumann" : "energy-dirichlet", describe(sol), lhs, rhs,
              kEnergyTol);
}

IdentityReport rellich_identity(const disk::DiskSolution &sol, const norms::QuadratureControl &ctl)
{
  if (!sol.lambda().is_real())
    throw Error(ErrorKind::Regime, "Rellich identity is checked for real lambda only");
  const double lam2 = sol.lambda().squared().real();
  auto rep = norms::interior_report(sol, ctl);
  double l2g = rep.at(norms::NormId::L2_Gamma);
  double tan = rep.at(norms::NormId::tangential_L2_Gamma);
  double dn = rep.at(norms::NormId::normal_deriv_L2_Gamma);
  double l2 = rep.at(norms::NormId::L2_Omega);
  double lhs = lam2 * l2g * l2g + tan * tan;
  double rhs = dn * dn + 2.0 * lam2 * l2 * l2;
  return make("rellich", describe(sol), lhs, rhs, kRellichTol);
}

IdentityReport weighted_energy_identity(const disk::DiskSolution &sol,
                                        const norms::QuadratureControl &ctl)
{
  const cplx lam2 = sol.lambda().squared();
  cplx lhs = 0.0, rhs = 0.0;
  for (int n : modes_of(sol))
  {
    auto I = norms::mode_integrals(sol, n, ctl);
    lhs += lam2 * I.dgrad + I.dlap;
    // grad d = -e_r, so -u grad d . grad conj(u) = u conj(u_r)
    rhs += lam2 * std::conj(I.cross);
  }
  return make("weighted-energy", describe(sol), kTwoPi * lhs, kTwoPi * rhs, kWeightedTol);
}

IdentityReport green_duality(const disk::DiskSolution &u, const disk::CircleData &h,
                             const disk::DiskSolution &z, const disk::ModalSource &F,
                             const norms::QuadratureControl &ctl)
{
  // e^{i n theta} e^{i m theta} integrates to 2 pi only for m = -n
  cplx lhs = kTwoPi * radial_product(u, -F.n, F, ctl);
  int nmax = std::max({nmax_of(z), h.n_max(), std::abs(F.n)});
  disk::CircleData zt = z.trace(nmax);
  cplx rhs = 0.0;
  for (int m : zt.support())
    rhs += h.coefficient(-m) * zt.coefficient(m);
  rhs *= kTwoPi;
  return make("green-duality", describe(u) + " source-mode=" + std::to_string(F.n), lhs, rhs,
              kGreenTol);
}

IdentityReport mean_value_identity(const Frequency &lambda, const disk::CircleData &h)
{
  if (lambda.is_zero())
    throw Error(ErrorKind::Regime, "mean value relation needs lambda != 0");
  auto sol = disk::solve_neumann_disk(lambda, h);
  cplx lhs = disk::disk_integral(sol);
  cplx rhs = kTwoPi * h.coefficient(0) / lambda.squared();
  return make("mean-value", describe(sol), lhs, rhs, kMeanValueTol);
}

double t232_inequality(const disk::DiskSolution &v)
{
  auto rep = norms::interior_report(v);
  double lap = rep.at(norms::NormId::sqrtd_lap_L2);
  double h1 = rep.at(norms::NormId::H1_Omega);
  if (rep.at(norms::NormId::L2_Gamma) > 1e-12 * std::max(h1, 1.0))
    throw Error(ErrorKind::Precondition, "v does not vanish on the boundary");
  if (lap == 0.0)
    throw Error(ErrorKind::Degenerate, "sqrt(d) Delta v vanishes");
  return (rep.at(norms::NormId::H32s_Omega) + rep.at(norms::NormId::sqrtd_hess_L2)) / lap;
}

SuiteOptions default_suite()
{
  SuiteOptions opt;
  for (std::uint64_t s = 0; s < 20; ++s)
    opt.seeds.push_back(s);
  return opt;
}

std::vector<IdentityReport> identity_suite(const SuiteOptions &opt)
{
  std::vector<IdentityReport> out;
  for (std::uint64_t seed : opt.seeds)
    for (double lam : opt.lambdas)
      for (int n : opt.modes)
      {
        std::mt19937_64 rng(seed * 1000003u + std::uint64_t(n) * 1009u +
                            std::uint64_t(std::llround(lam * 64)));
        std::normal_distribution<double> nd;
        auto rc = [&] { return cplx(nd(rng), nd(rng)); };
        Frequency lambda = Frequency::real(lam);
        int nmax = std::max(disk::kDefaultNmax, n);
        disk::CircleData data(nmax);
        data.set(n, rc());
        if (n != 0)
          data.set(-n, rc());
        auto uN = disk::solve_neumann_disk(lambda, data);
        auto uD = disk::solve_dirichlet_disk(lambda, data);
        out.push_back(energy_identity(uN, data, Bc::Neumann, opt.quadrature));
        out.push_back(energy_identity(uD, data, Bc::Dirichlet, opt.quadrature));
        out.push_back(rellich_identity(uN, opt.quadrature));
        out.push_back(rellich_identity(uD, opt.quadrature));
        out.push_back(weighted_energy_identity(uN, opt.quadrature));
        out.push_back(weighted_energy_identity(uD, opt.quadrature));

        // source on mode -n so that it pairs with the n component of u
        disk::ModalSource F;
        F.n = -n;
        F.coeffs.assign(std::size_t(n) + 5, 0.0);
        for (int k = n; k < n + 5; ++k)
          F.coeffs[k] = rc();
        auto z = disk::solve_source_disk(lambda, F, disk::SourceBc::NeumannZero);
        out.push_back(green_duality(uN, data, z, F, opt.quadrature));
        if (n == 0)
          out.push_back(mean_value_identity(lambda, data));
      }
  return out;
}

}  // namespace helmlab::ident
