#pragma once

#include <helmlab/frequency.hpp>
#include <helmlab/quadrature.hpp>
#include <helmlab/specfun.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace helmlab::disk
{

inline constexpr int kDefaultNmax = 128;
// Source polynomials have degree at most |n| + kMaxSourceDegree.
inline constexpr int kMaxSourceDegree = 16;
inline constexpr double kDefaultLambda0 = 0.1;

// Finite Fourier series g(theta) = sum_{|n| <= n_max} g_n e^{i n theta}.
class CircleData
{
public:
  explicit CircleData(int n_max = kDefaultNmax);

  static CircleData mode(int n, cplx amplitude = 1.0, int n_max = kDefaultNmax);
  // a cos(n theta) + b sin(n theta) with real a, b
  static CircleData real_mode(int n, double a, double b, int n_max = kDefaultNmax);

  int n_max() const { return n_max_; }
  cplx coefficient(int n) const;
  void set(int n, cplx value);
  void add(int n, cplx value) { set(n, coefficient(n) + value); }

  bool mean_zero() const { return coefficient(0) == cplx(0.0); }
  bool is_zero() const;
  // g_{-n} == conj(g_n) for every n
  bool is_real() const;
  cplx evaluate(double theta) const;
  // modes with nonzero coefficient, ascending
  std::vector<int> support() const;

private:
  int n_max_;
  std::vector<cplx> c_;
};

// F(r, theta) = f(r) e^{i n theta} with f a polynomial in r.
struct ModalSource
{
  int n = 0;
  std::vector<cplx> coeffs;  // f(r) = sum_k coeffs[k] r^k

  cplx f(double r) const;
  // integral of f(r) r dr over [0, 1]
  cplx weighted_mean() const;
};

enum class RadialKind
{
  Power,
  BesselI,
  SourceParticular,
  Polynomial
};

struct RadialJet
{
  cplx v{};
  cplx d1{};
  cplx d2{};
};

class RadialProfile
{
public:
  virtual ~RadialProfile() = default;
  virtual RadialKind kind() const = 0;
  virtual RadialJet at(double r) const = 0;
  // Source term f(r) of the radial equation (zero for homogeneous profiles).
  virtual cplx forcing(double) const { return 0.0; }
  virtual void sample(const quad::PanelMesh &mesh, std::vector<RadialJet> &out) const;
};

struct ModalComponent
{
  int n = 0;
  cplx coefficient{};
  std::shared_ptr<const RadialProfile> radial;
};

struct PointValues
{
  cplx u{}, ur{}, ut{}, urr{}, urt{}, utt{}, lap{};
};

class DiskSolution
{
public:
  DiskSolution() = default;
  DiskSolution(Frequency lambda, std::vector<ModalComponent> components);

  const Frequency &lambda() const { return lambda_; }
  const std::vector<ModalComponent> &components() const { return components_; }

  // r in [0, 1]
  PointValues evaluate(double r, double theta) const;
  cplx u(double r, double theta) const { return evaluate(r, theta).u; }
  cplx source(double r, double theta) const;

  CircleData trace(int n_max = kDefaultNmax) const;
  CircleData normal_derivative(int n_max = kDefaultNmax) const;

private:
  Frequency lambda_;
  std::vector<ModalComponent> components_;
};

enum class SourceBc
{
  DirichletZero,
  NeumannZero
};

// Panel mesh resolving the radial kernels of mode n at frequency lambda.
quad::PanelMesh radial_mesh(const Frequency &lambda, int n);

std::shared_ptr<const RadialProfile> power_profile(int n, double scale);
std::shared_ptr<const RadialProfile> bessel_profile(const Frequency &lambda, int n,
                                                    specfun::Scaled denominator);
std::shared_ptr<const RadialProfile> polynomial_profile(std::vector<cplx> coeffs);

DiskSolution solve_dirichlet_disk(const Frequency &lambda, const CircleData &g);
DiskSolution solve_neumann_disk(const Frequency &lambda, const CircleData &h);
DiskSolution solve_source_disk(const Frequency &lambda, const ModalSource &source, SourceBc bc,
                               double lambda0 = kDefaultLambda0);

// Modal function sum_k coefficient_k R_k(r) e^{i n_k theta} without a PDE.
DiskSolution modal_function(std::vector<ModalComponent> components);

cplx dtn_symbol(const Frequency &lambda, int n);
CircleData dtn_apply(const Frequency &lambda, const CircleData &g);

// Relative residual of int_Omega u = lambda^{-2} int_Gamma h for the Neumann solution.
double mean_value_residual(const Frequency &lambda, const CircleData &h);

// Integral of u over the disk by radial quadrature.
cplx disk_integral(const DiskSolution &sol);

// max over modes and random points of |lambda^2 u - Delta u - F|, divided by
// (|lambda|^2 + 1) * scale where scale is the largest |u| + |F| / (|lambda|^2 + 1)
// seen for that mode.
double pde_residual(const DiskSolution &sol, std::uint64_t seed, int points = 64);

}  // namespace helmlab::disk
