#include <helmlab/diskmodal.hpp>

#include <helmlab/error.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace helmlab::disk
{

using specfun::Scaled;

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_mode(int n, int n_max)
{
  if (std::abs(n) > n_max)
    throw Error(ErrorKind::Input, "mode index exceeds n_max");
}

}  // namespace

// CircleData ----------------------------------------------------------------

CircleData::CircleData(int n_max) : n_max_(n_max)
{
  if (n_max < 0 || n_max > specfun::kMaxOrder)
    throw Error(ErrorKind::Input, "n_max must lie in [0, 256]");
  c_.assign(2 * n_max + 1, cplx(0.0));
}

CircleData CircleData::mode(int n, cplx amplitude, int n_max)
{
  CircleData d(n_max);
  d.set(n, amplitude);
  return d;
}

CircleData CircleData::real_mode(int n, double a, double b, int n_max)
{
  CircleData d(n_max);
  if (n == 0)
  {
    d.set(0, a);
    return d;
  }
  n = std::abs(n);
  d.set(n, cplx(0.5 * a, -0.5 * b));
  d.set(-n, cplx(0.5 * a, 0.5 * b));
  return d;
}

cplx CircleData::coefficient(int n) const
{
  if (std::abs(n) > n_max_)
    return 0.0;
  return c_[n + n_max_];
}

void CircleData::set(int n, cplx value)
{
  check_mode(n, n_max_);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw Error(ErrorKind::Input, "non-finite Fourier coefficient");
  c_[n + n_max_] = value;
}

bool CircleData::is_zero() const
{
  return std::all_of(c_.begin(), c_.end(), [](cplx v) { return v == cplx(0.0); });
}

bool CircleData::is_real() const
{
  for (int n = 0; n <= n_max_; ++n)
    if (std::abs(coefficient(-n) - std::conj(coefficient(n))) >
        1e-14 * (std::abs(coefficient(n)) + 1e-300))
      return false;
  return true;
}

cplx CircleData::evaluate(double theta) const
{
  cplx s = 0.0;
  for (int n = -n_max_; n <= n_max_; ++n)
  {
    cplx c = c_[n + n_max_];
    if (c != cplx(0.0))
      s += c * std::polar(1.0, n * theta);
  }
  return s;
}

std::vector<int> CircleData::support() const
{
  std::vector<int> out;
  for (int n = -n_max_; n <= n_max_; ++n)
    if (c_[n + n_max_] != cplx(0.0))
      out.push_back(n);
  return out;
}

// ModalSource ---------------------------------------------------------------

cplx ModalSource::f(double r) const
{
  cplx s = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    s = s * r + *it;
  return s;
}

cplx ModalSource::weighted_mean() const
{
  cplx s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    s += coeffs[k] / double(k + 2);
  return s;
}

// Profiles ------------------------------------------------------------------

void RadialProfile::sample(const quad::PanelMesh &mesh, std::vector<RadialJet> &out) const
{
  out.resize(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i)
    out[i] = at(mesh.nodes()[i]);
}

namespace
{

class PowerProfile final : public RadialProfile
{
public:
  PowerProfile(int n, double scale) : m_(std::abs(n)), scale_(scale) {}
  RadialKind kind() const override { return RadialKind::Power; }
  RadialJet at(double r) const override
  {
    RadialJet j;
    j.v = std::pow(r, m_) / scale_;
    j.d1 = m_ >= 1 ? m_ * std::pow(r, m_ - 1) / scale_ : 0.0;
    j.d2 = m_ >= 2 ? m_ * (m_ - 1.0) * std::pow(r, m_ - 2) / scale_ : 0.0;
    return j;
  }

private:
  int m_;
  double scale_;
};

class BesselProfile final : public RadialProfile
{
public:
  BesselProfile(cplx lambda, int n, Scaled den) : lambda_(lambda), n_(std::abs(n)), den_(den) {}
  RadialKind kind() const override { return RadialKind::BesselI; }
  RadialJet at(double r) const override
  {
    auto jet = specfun::bessel_i_jet(n_, lambda_ * r);
    RadialJet j;
    j.v = (jet.f / den_).value();
    j.d1 = lambda_ * (jet.df / den_).value();
    j.d2 = lambda_ * lambda_ * (jet.d2f / den_).value();
    return j;
  }

private:
  cplx lambda_;
  int n_;
  Scaled den_;
};

class PolynomialProfile final : public RadialProfile
{
public:
  explicit PolynomialProfile(std::vector<cplx> c) : c_(std::move(c)) {}
  RadialKind kind() const override { return RadialKind::Polynomial; }
  RadialJet at(double r) const override
  {
    RadialJet j;
    for (std::size_t k = c_.size(); k-- > 0;)
    {
      j.d2 = j.d2 * r + 2.0 * j.d1;
      j.d1 = j.d1 * r + j.v;
      j.v = j.v * r + c_[k];
    }
    return j;
  }

private:
  std::vector<cplx> c_;
};

// Variation of parameters with the pair I_n(lambda r), K_n(lambda r):
//   w_p(r) = K(lambda r) A(r) + I(lambda r) B(r),
//   A(r) = int_0^r I(lambda s) f(s) s ds,  B(r) = int_r^1 K(lambda s) f(s) s ds,
// plus c I(lambda r) for the boundary condition.
class SourceProfile final : public RadialProfile
{
public:
  SourceProfile(const Frequency &lambda, ModalSource src, SourceBc bc)
    : lam_(lambda.value()), n_(std::abs(src.n)), src_(std::move(src)),
      base_(radial_mesh(lambda, n_))
  {
    std::vector<Node> nodes(base_.size());
    for (std::size_t i = 0; i < base_.size(); ++i)
      nodes[i] = node(base_.nodes()[i], false);
    std::vector<Scaled> a, b;
    cumulate(base_, nodes, a, b, a_edges_, b_edges_);
    Scaled a1 = a_edges_.back();
    Node one = node(1.0, true);
    if (bc == SourceBc::DirichletZero)
      c_ = -(one.k * a1) / one.i;
    else
      c_ = -(one.dk * a1) / one.di;
  }

  RadialKind kind() const override { return RadialKind::SourceParticular; }
  cplx forcing(double r) const override { return src_.f(r); }

  RadialJet at(double r) const override
  {
    r = std::clamp(r, 1e-8, 1.0);
    const auto &edges = base_.edges();
    std::size_t j = std::upper_bound(edges.begin(), edges.end(), r) - edges.begin();
    j = std::clamp<std::size_t>(j, 1, edges.size() - 1) - 1;
    const auto &rule = quad::panel_rule();
    Scaled a = a_edges_[j], b = b_edges_[j + 1];
    auto add_piece = [&](double lo, double hi, bool i_kind, Scaled &acc) {
      if (hi <= lo)
        return;
      double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      std::vector<Scaled> g(quad::kPanelOrder);
      for (int p = 0; p < quad::kPanelOrder; ++p)
      {
        double s = c + h * rule.x[p];
        Scaled bes = i_kind ? specfun::bessel_i_orders(n_, n_, lam_ * s)[0]
                            : specfun::bessel_k_orders(n_, n_, lam_ * s)[0];
        g[p] = bes * (src_.f(s) * s * h * rule.w[p]);
      }
      acc = acc + sum(g);
    };
    add_piece(edges[j], r, true, a);
    add_piece(r, edges[j + 1], false, b);
    return combine(node(r, true), a, b, r);
  }

  void sample(const quad::PanelMesh &mesh, std::vector<RadialJet> &out) const override
  {
    std::vector<Node> nodes(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i)
      nodes[i] = node(mesh.nodes()[i], true);
    std::vector<Scaled> a, b, ea, eb;
    cumulate(mesh, nodes, a, b, ea, eb);
    out.resize(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i)
      out[i] = combine(nodes[i], a[i], b[i], mesh.nodes()[i]);
  }

private:
  struct Node
  {
    Scaled i, di, d2i, k, dk, d2k;
  };

  Node node(double r, bool derivatives) const
  {
    Node nd;
    cplx z = lam_ * r;
    if (derivatives)
    {
      auto ji = specfun::bessel_i_jet(n_, z);
      auto jk = specfun::bessel_k_jet(n_, z);
      nd.i = ji.f;
      nd.di = ji.df;
      nd.d2i = ji.d2f;
      nd.k = jk.f;
      nd.dk = jk.df;
      nd.d2k = jk.d2f;
    }
    else
    {
      nd.i = specfun::bessel_i_orders(n_, n_, z)[0];
      nd.k = specfun::bessel_k_orders(n_, n_, z)[0];
    }
    return nd;
  }

  static Scaled sum(const std::vector<Scaled> &g)
  {
    double ref = -INFINITY;
    for (const auto &s : g)
      if (!s.is_zero())
        ref = std::max(ref, s.exponent);
    if (ref == -INFINITY)
      return Scaled{};
    cplx acc = 0.0;
    for (const auto &s : g)
      if (!s.is_zero())
        acc += s.mantissa * std::exp(s.exponent - ref);
    return Scaled{acc, ref}.normalized();
  }

  RadialJet combine(const Node &nd, const Scaled &a, const Scaled &b, double r) const
  {
    RadialJet j;
    j.v = (nd.k * a + nd.i * b + c_ * nd.i).value();
    j.d1 = lam_ * (nd.dk * a + nd.di * b + c_ * nd.di).value();
    j.d2 = lam_ * lam_ * (nd.d2k * a + nd.d2i * b + c_ * nd.d2i).value() - src_.f(r);
    return j;
  }

  // Cumulative integrals A, B at the mesh nodes and at panel edges.
  void cumulate(const quad::PanelMesh &mesh, const std::vector<Node> &nodes,
                std::vector<Scaled> &a, std::vector<Scaled> &b, std::vector<Scaled> &ea,
                std::vector<Scaled> &eb) const
  {
    const int m = quad::kPanelOrder;
    const auto &rule = quad::panel_rule();
    const auto &s = quad::cumulative_matrix();
    const std::size_t panels = mesh.panels();
    const auto &edges = mesh.edges();
    a.assign(mesh.size(), Scaled{});
    b.assign(mesh.size(), Scaled{});
    ea.assign(panels + 1, Scaled{});
    eb.assign(panels + 1, Scaled{});
    std::vector<Scaled> ga(m), gb(m);
    std::vector<cplx> ca(m), cb(m);
    std::vector<Scaled> left_b(mesh.size()), full_b(panels);
    for (std::size_t j = 0; j < panels; ++j)
    {
      const double h = 0.5 * (edges[j + 1] - edges[j]);
      for (int p = 0; p < m; ++p)
      {
        std::size_t idx = j * m + p;
        double rho = mesh.nodes()[idx];
        cplx fr = src_.f(rho) * rho * h;
        ga[p] = nodes[idx].i * fr;
        gb[p] = nodes[idx].k * fr;
      }
      double ra = ref_of(ga), rb = ref_of(gb);
      for (int p = 0; p < m; ++p)
      {
        ca[p] = rel(ga[p], ra);
        cb[p] = rel(gb[p], rb);
      }
      cplx fa = 0.0, fb = 0.0;
      for (int p = 0; p < m; ++p)
      {
        fa += rule.w[p] * ca[p];
        fb += rule.w[p] * cb[p];
      }
      for (int q = 0; q < m; ++q)
      {
        cplx pa = 0.0, pb = 0.0;
        for (int p = 0; p < m; ++p)
        {
          pa += s[q * m + p] * ca[p];
          pb += (rule.w[p] - s[q * m + p]) * cb[p];
        }
        a[j * m + q] = ea[j] + make(pa, ra);
        left_b[j * m + q] = make(pb, rb);
      }
      ea[j + 1] = ea[j] + make(fa, ra);
      full_b[j] = make(fb, rb);
    }
    for (std::size_t j = panels; j-- > 0;)
    {
      eb[j] = eb[j + 1] + full_b[j];
      for (int q = 0; q < m; ++q)
        b[j * m + q] = eb[j + 1] + left_b[j * m + q];
    }
  }

  static double ref_of(const std::vector<Scaled> &g)
  {
    double ref = -INFINITY;
    for (const auto &s : g)
      if (!s.is_zero())
        ref = std::max(ref, s.exponent);
    return ref;
  }
  static cplx rel(const Scaled &s, double ref)
  {
    return s.is_zero() ? cplx(0.0) : s.mantissa * std::exp(s.exponent - ref);
  }
  static Scaled make(cplx v, double ref)
  {
    if (v == cplx(0.0) || ref == -INFINITY)
      return Scaled{};
    return Scaled{v, ref}.normalized();
  }

  cplx lam_;
  int n_;
  ModalSource src_;
  quad::PanelMesh base_;
  std::vector<Scaled> a_edges_, b_edges_;
  Scaled c_;
};

}  // namespace

quad::PanelMesh radial_mesh(const Frequency &lambda, int n)
{
  double h = std::min(0.125, 8.0 / (lambda.modulus() + std::abs(n) + 1.0));
  return quad::PanelMesh::uniform(0.0, 1.0, h, 8);
}

std::shared_ptr<const RadialProfile> power_profile(int n, double scale)
{
  return std::make_shared<PowerProfile>(n, scale);
}

std::shared_ptr<const RadialProfile> bessel_profile(const Frequency &lambda, int n, Scaled den)
{
  return std::make_shared<BesselProfile>(lambda.value(), n, den);
}

std::shared_ptr<const RadialProfile> polynomial_profile(std::vector<cplx> coeffs)
{
  return std::make_shared<PolynomialProfile>(std::move(coeffs));
}

// DiskSolution --------------------------------------------------------------

DiskSolution::DiskSolution(Frequency lambda, std::vector<ModalComponent> components)
  : lambda_(lambda), components_(std::move(components))
{
}

PointValues DiskSolution::evaluate(double r, double theta) const
{
  if (r < 0.0 || r > 1.0)
    throw Error(ErrorKind::Input, "radius outside [0, 1]");
  PointValues p;
  for (const auto &comp : components_)
  {
    RadialJet j = comp.radial->at(r);
    const double n = comp.n;
    cplx e = comp.coefficient * std::polar(1.0, n * theta);
    const cplx in(0.0, n);
    p.u += j.v * e;
    p.ur += j.d1 * e;
    p.ut += in * j.v * e;
    p.urr += j.d2 * e;
    p.urt += in * j.d1 * e;
    p.utt += -n * n * j.v * e;
    if (r > 0.0)
      p.lap += (j.d2 + j.d1 / r - n * n * j.v / (r * r)) * e;
    else if (comp.n == 0)
      p.lap += 2.0 * j.d2 * e;
  }
  return p;
}

cplx DiskSolution::source(double r, double theta) const
{
  cplx s = 0.0;
  for (const auto &comp : components_)
    s += comp.coefficient * comp.radial->forcing(r) * std::polar(1.0, comp.n * theta);
  return s;
}

CircleData DiskSolution::trace(int n_max) const
{
  CircleData d(n_max);
  for (const auto &comp : components_)
    d.add(comp.n, comp.coefficient * comp.radial->at(1.0).v);
  return d;
}

CircleData DiskSolution::normal_derivative(int n_max) const
{
  CircleData d(n_max);
  for (const auto &comp : components_)
    d.add(comp.n, comp.coefficient * comp.radial->at(1.0).d1);
  return d;
}

// Solvers -------------------------------------------------------------------

DiskSolution solve_dirichlet_disk(const Frequency &lambda, const CircleData &g)
{
  std::map<int, std::shared_ptr<const RadialProfile>> cache;
  std::vector<ModalComponent> comps;
  for (int n : g.support())
  {
    int m = std::abs(n);
    auto &prof = cache[m];
    if (!prof)
    {
      if (lambda.is_zero())
        prof = power_profile(m, 1.0);
      else
        prof = bessel_profile(lambda, m, specfun::bessel_i_scaled(m, lambda.value()));
    }
    comps.push_back({n, g.coefficient(n), prof});
  }
  return DiskSolution(lambda, std::move(comps));
}

DiskSolution solve_neumann_disk(const Frequency &lambda, const CircleData &h)
{
  if (lambda.is_zero() && !h.mean_zero())
    throw Error(ErrorKind::Compatibility, "lambda = 0 Neumann data must have zero mean");
  std::map<int, std::shared_ptr<const RadialProfile>> cache;
  std::vector<ModalComponent> comps;
  for (int n : h.support())
  {
    int m = std::abs(n);
    auto &prof = cache[m];
    if (!prof)
    {
      if (lambda.is_zero())
        prof = power_profile(m, double(m));
      else
      {
        auto jet = specfun::bessel_i_jet(m, lambda.value());
        prof = bessel_profile(lambda, m, jet.df * lambda.value());
      }
    }
    comps.push_back({n, h.coefficient(n), prof});
  }
  return DiskSolution(lambda, std::move(comps));
}

DiskSolution solve_source_disk(const Frequency &lambda, const ModalSource &source, SourceBc bc,
                               double lambda0)
{
  if (lambda.is_zero())
    throw Error(ErrorKind::Capability, "source problems at lambda = 0 are not supported");
  if (std::abs(source.n) > specfun::kMaxOrder)
    throw Error(ErrorKind::Input, "source mode exceeds 256");
  if (source.coeffs.size() > std::size_t(std::abs(source.n) + kMaxSourceDegree + 1))
    throw Error(ErrorKind::Input, "source polynomial degree above |n| + 16");
  for (std::size_t k = 0; k < source.coeffs.size(); ++k)
  {
    cplx c = source.coeffs[k];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::Input, "non-finite source coefficient");
    if (c != cplx(0.0) && int(k) < std::abs(source.n) - 1)
      throw Error(ErrorKind::Input, "source coefficient r^k with k < |n| - 1 is not supported");
  }
  if (bc == SourceBc::NeumannZero && source.n == 0 && source.weighted_mean() != cplx(0.0) &&
      lambda.modulus() < lambda0)
    throw Error(ErrorKind::Regime, "nonzero-mean Neumann source needs |lambda| >= lambda0");
  std::vector<ModalComponent> comps;
  bool zero = std::all_of(source.coeffs.begin(), source.coeffs.end(),
                          [](cplx c) { return c == cplx(0.0); });
  if (!zero)
    comps.push_back({source.n, 1.0, std::make_shared<SourceProfile>(lambda, source, bc)});
  return DiskSolution(lambda, std::move(comps));
}

DiskSolution modal_function(std::vector<ModalComponent> components)
{
  return DiskSolution(Frequency(), std::move(components));
}

cplx dtn_symbol(const Frequency &lambda, int n)
{
  if (lambda.is_zero())
    return double(std::abs(n));
  auto jet = specfun::bessel_i_jet(std::abs(n), lambda.value());
  return lambda.value() * (jet.df / jet.f).value();
}

CircleData dtn_apply(const Frequency &lambda, const CircleData &g)
{
  CircleData out(g.n_max());
  std::map<int, cplx> symbols;
  for (int n : g.support())
  {
    int m = std::abs(n);
    auto it = symbols.find(m);
    if (it == symbols.end())
      it = symbols.emplace(m, dtn_symbol(lambda, m)).first;
    out.set(n, it->second * g.coefficient(n));
  }
  return out;
}

cplx disk_integral(const DiskSolution &sol)
{
  cplx total = 0.0;
  for (const auto &comp : sol.components())
  {
    if (comp.n != 0)
      continue;
    auto mesh = radial_mesh(sol.lambda(), 0);
    std::vector<RadialJet> jets;
    cplx prev = 0.0;
    for (int level = 0;; ++level)
    {
      comp.radial->sample(mesh, jets);
      cplx acc = 0.0;
      for (std::size_t i = 0; i < mesh.size(); ++i)
        acc += mesh.weights()[i] * mesh.nodes()[i] * jets[i].v;
      if (level > 0 && std::abs(acc - prev) <= 1e-12 * std::abs(acc))
      {
        prev = acc;
        break;
      }
      if (level > 0 && mesh.size() > (std::size_t(1) << 20))
        throw Error(ErrorKind::Accuracy, "disk integral did not converge");
      prev = acc;
      mesh = mesh.refined();
    }
    total += kTwoPi * comp.coefficient * prev;
  }
  return total;
}

double mean_value_residual(const Frequency &lambda, const CircleData &h)
{
  if (lambda.is_zero())
    throw Error(ErrorKind::Regime, "mean value relation needs lambda != 0");
  auto sol = solve_neumann_disk(lambda, h);
  cplx lhs = disk_integral(sol);
  cplx rhs = kTwoPi * h.coefficient(0) / lambda.squared();
  double den = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / den;
}

double pde_residual(const DiskSolution &sol, std::uint64_t seed, int points)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rdist(0.02, 1.0);
  const cplx lam2 = sol.lambda().squared();
  const double weight = std::abs(lam2) + 1.0;
  double worst = 0.0;
  for (const auto &comp : sol.components())
  {
    double res = 0.0, scale = 0.0;
    const double n = comp.n;
    const double c = std::abs(comp.coefficient);
    for (int k = 0; k < points; ++k)
    {
      double r = rdist(rng);
      RadialJet j = comp.radial->at(r);
      cplx f = comp.radial->forcing(r);
      cplx lap = j.d2 + j.d1 / r - n * n * j.v / (r * r);
      res = std::max(res, c * std::abs(lam2 * j.v - lap - f));
      scale = std::max(scale, c * (std::abs(j.v) + std::abs(f) / weight));
    }
    if (scale > 0.0)
      worst = std::max(worst, res / (weight * scale));
  }
  return worst;
}

}  // namespace helmlab::disk
