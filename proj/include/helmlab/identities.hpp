#pragma once

#include <helmlab/diskmodal.hpp>
#include <helmlab/normkit.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace helmlab::ident
{

inline constexpr double kEnergyTol = 1e-8;
inline constexpr double kRellichTol = 1e-6;
inline constexpr double kWeightedTol = 1e-6;
inline constexpr double kGreenTol = 1e-7;
inline constexpr double kMeanValueTol = 1e-9;
inline constexpr double kT232Bound = 50.0;

enum class Bc
{
  Neumann,
  Dirichlet
};

struct IdentityReport
{
  std::string id;
  std::string inputs;
  cplx lhs{};
  cplx rhs{};
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// |lhs - rhs| / max(|lhs|, |rhs|, 1e-300)
double relative_residual(cplx lhs, cplx rhs);

// lambda^2 ||u||^2 + ||grad u||^2 = int_Gamma conj(u) du/dn, with du/dn = h
// (Neumann) or u = g (Dirichlet) taken from the datum.
IdentityReport energy_identity(const disk::DiskSolution &sol, const disk::CircleData &data, Bc bc,
                               const norms::QuadratureControl &ctl = {});

// Field x on the unit disk, real lambda:
// int_Gamma (lambda^2 |u|^2 + |grad_T u|^2) = int_Gamma |du/dn|^2 + 2 lambda^2 int_Omega |u|^2
IdentityReport rellich_identity(const disk::DiskSolution &sol,
                                const norms::QuadratureControl &ctl = {});

// lambda^2 ||sqrt(d) grad u||^2 + ||sqrt(d) Delta u||^2 = -lambda^2 int u grad d . grad conj(u)
IdentityReport weighted_energy_identity(const disk::DiskSolution &sol,
                                        const norms::QuadratureControl &ctl = {});

// int_Omega u F = int_Gamma h z for u the Neumann solution with datum h and z the
// NeumannZero source solution for F (bilinear, no conjugation).
IdentityReport green_duality(const disk::DiskSolution &u, const disk::CircleData &h,
                             const disk::DiskSolution &z, const disk::ModalSource &F,
                             const norms::QuadratureControl &ctl = {});

IdentityReport mean_value_identity(const Frequency &lambda, const disk::CircleData &h);

// (surrogate_h32(v) + ||sqrt(d) D^2 v||) / ||sqrt(d) Delta v|| for v vanishing on Gamma.
double t232_inequality(const disk::DiskSolution &v);

struct SuiteOptions
{
  std::vector<std::uint64_t> seeds;
  std::vector<double> lambdas{0.5, 1.0, 5.0, 25.0, 125.0};
  std::vector<int> modes{0, 1, 2, 8, 32};
  norms::QuadratureControl quadrature{};
};

SuiteOptions default_suite();  // seeds 0..19

// Every identity on random data for each (seed, lambda, mode).
std::vector<IdentityReport> identity_suite(const SuiteOptions &opt);

}  // namespace helmlab::ident
