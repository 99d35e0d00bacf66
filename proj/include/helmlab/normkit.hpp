#pragma once

#include <helmlab/diskmodal.hpp>

#include <map>
#include <optional>
#include <string>

namespace helmlab::norms
{

enum class NormId
{
  L2_Omega,
  H1_Omega,
  grad_L2_Omega,
  H12s_Omega,  // surrogate (||u||_{L2} ||u||_{H1})^{1/2}
  H32s_Omega,  // surrogate ||u||_{H1} + ||sqrt(d) Delta u|| + ||u||_{H1(Gamma)}
  sqrtd_L2_Omega,
  sqrtd_grad_L2,
  sqrtd_hess_L2,
  sqrtd_lap_L2,
  L2_Gamma,
  H1_Gamma,
  Hs_Gamma,
  Hm1_Gamma,
  Hm1lambda_Gamma,
  triple_H1lambda_Gamma,
  normal_deriv_L2_Gamma,
  tangential_L2_Gamma
};

const char *to_string(NormId id);
std::optional<NormId> norm_from_string(const std::string &name);
bool is_interior(NormId id);

struct NormReport
{
  std::map<NormId, double> values;
  double at(NormId id) const;
};

// Radial integrals of one mode n (without the 2 pi factor), weight r dr.
struct RadialIntegrals
{
  double l2 = 0.0;     // |R|^2
  double grad = 0.0;   // |R'|^2 + n^2 |R|^2 / r^2
  double dl2 = 0.0;    // d |R|^2
  double dgrad = 0.0;  // d (|R'|^2 + n^2 |R|^2 / r^2)
  double dhess = 0.0;  // d (|R''|^2 + 2 n^2 |R'/r - R/r^2|^2 + |R'/r - n^2 R/r^2|^2)
  double dlap = 0.0;   // d |R'' + R'/r - n^2 R / r^2|^2
  cplx cross{};        // conj(R) R'
  cplx mean{};         // R
};

struct QuadratureControl
{
  double rel_tol = 1e-10;
  std::size_t max_nodes = std::size_t(1) << 20;
  // Fixed mesh: skip adaptivity and use radial_mesh refined this many times.
  std::optional<int> fixed_refinements;
  // Fixed mesh of this many uniform panels on [0, 1] (takes precedence).
  std::optional<int> uniform_panels;
};

// Integrals of the combined radial function of mode n in sol (components
// with equal n are summed).
// Fixed mesh selected by ctl, if any.
std::optional<quad::PanelMesh> fixed_mesh(const quad::PanelMesh &base, const QuadratureControl &ctl);

RadialIntegrals mode_integrals(const disk::DiskSolution &sol, int n,
                               const QuadratureControl &ctl = {});

// Interior norms and the trace / normal-derivative L2 norms of a solution.
NormReport interior_report(const disk::DiskSolution &sol, const QuadratureControl &ctl = {});
double interior_norm(const disk::DiskSolution &sol, NormId id);

double surrogate_h32(const disk::DiskSolution &sol);
double surrogate_h12(const disk::DiskSolution &sol);

// ||g||_{H^s(Gamma)}, |s| <= 3/2
double boundary_norm(const disk::CircleData &g, double s);
double tangential_norm(const disk::CircleData &g);
// |lambda| ||g||_{L2} + ||g||_{H1}
double triple_norm(const disk::CircleData &g, const Frequency &lambda);
// modal dual of the triple norm
double dual_lambda_norm(const disk::CircleData &g, const Frequency &lambda);
// 2 pi sum g_n conj(f_n)
cplx boundary_pairing(const disk::CircleData &g, const disk::CircleData &f);

// All boundary ids for a circle function; Hs_Gamma evaluated at s.
NormReport boundary_report(const disk::CircleData &g, const Frequency &lambda, double s);

}  // namespace helmlab::norms
