#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace helmlab::quad
{

// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule
{
  std::vector<double> x;
  std::vector<double> w;
};

GaussRule gauss_legendre(int n);

inline constexpr int kPanelOrder = 32;
const GaussRule &panel_rule();

// S[q * 32 + p] = integral over [-1, x_q] of the p-th Lagrange basis polynomial
// of the panel rule. Applied to nodal values it yields cumulative integrals.
const std::vector<double> &cumulative_matrix();

// Composite Gauss-Legendre rule: 32 nodes on each panel [edges[j], edges[j+1]].
class PanelMesh
{
public:
  PanelMesh() = default;
  explicit PanelMesh(std::vector<double> edges);

  // Uniform panels of width <= h on [a, b] plus a geometric cluster of
  // `graded` panels toward a.
  static PanelMesh uniform(double a, double b, double h, int graded = 0);

  PanelMesh refined() const;

  std::size_t panels() const { return edges_.empty() ? 0 : edges_.size() - 1; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double> &edges() const { return edges_; }
  const std::vector<double> &nodes() const { return nodes_; }
  const std::vector<double> &weights() const { return weights_; }

private:
  std::vector<double> edges_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct AdaptiveOptions
{
  double rel_tol = 1e-10;
  std::size_t max_nodes = std::size_t(1) << 20;
  int initial_panels = 1;
};

// Vector integrand: f(x, out) writes out.size() values at x.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

// Integrates each component over the union of [breaks[i], breaks[i+1]] with
// uniform panel doubling until every component changes by less than rel_tol
// (relative to the largest component magnitude). Throws an accuracy error
// when the node cap is reached first.
std::vector<double> integrate_adaptive(const VectorIntegrand &f, std::span<const double> breaks,
                                       std::size_t components, const AdaptiveOptions &opt = {});

double integrate_adaptive(const std::function<double(double)> &f,
                          std::span<const double> breaks, const AdaptiveOptions &opt = {});

}  // namespace helmlab::quad
