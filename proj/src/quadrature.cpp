#include <helmlab/quadrature.hpp>

#include <helmlab/error.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace helmlab::quad
{

GaussRule gauss_legendre(int n)
{
  if (n < 1)
    throw Error(ErrorKind::Input, "Gauss-Legendre order must be positive");
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1)
        p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1)
        p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    rule.x[n / 2] = 0.0;
  return rule;
}

const GaussRule &panel_rule()
{
  static const GaussRule rule = gauss_legendre(kPanelOrder);
  return rule;
}

namespace
{

// Legendre values P_0..P_m at x.
std::vector<double> legendre_values(double x, int m)
{
  std::vector<double> p(m + 1);
  p[0] = 1.0;
  if (m >= 1)
    p[1] = x;
  for (int k = 2; k <= m; ++k)
    p[k] = ((2.0 * k - 1.0) * x * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
  return p;
}

std::vector<double> build_cumulative()
{
  const int n = kPanelOrder;
  const auto &rule = panel_rule();
  std::vector<std::vector<double>> pq(n), pp(n);
  for (int i = 0; i < n; ++i)
  {
    pq[i] = legendre_values(rule.x[i], n);
    pp[i] = pq[i];
  }
  std::vector<double> s(n * n);
  for (int q = 0; q < n; ++q)
  {
    for (int p = 0; p < n; ++p)
    {
      double acc = 0.5 * (rule.x[q] + 1.0);
      for (int k = 1; k < n; ++k)
        acc += 0.5 * pp[p][k] * (pq[q][k + 1] - pq[q][k - 1]);
      s[q * n + p] = rule.w[p] * acc;
    }
  }
  return s;
}

}  // namespace

const std::vector<double> &cumulative_matrix()
{
  static const std::vector<double> s = build_cumulative();
  return s;
}

PanelMesh::PanelMesh(std::vector<double> edges) : edges_(std::move(edges))
{
  const auto &rule = panel_rule();
  if (edges_.size() < 2)
    return;
  nodes_.reserve(panels() * kPanelOrder);
  weights_.reserve(panels() * kPanelOrder);
  for (std::size_t j = 0; j + 1 < edges_.size(); ++j)
  {
    double a = edges_[j], b = edges_[j + 1];
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < kPanelOrder; ++i)
    {
      nodes_.push_back(c + h * rule.x[i]);
      weights_.push_back(h * rule.w[i]);
    }
  }
}

PanelMesh PanelMesh::uniform(double a, double b, double h, int graded)
{
  int count = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-12)));
  double step = (b - a) / count;
  std::vector<double> edges;
  edges.push_back(a);
  for (int g = graded; g >= 1; --g)
    edges.push_back(a + step * std::ldexp(1.0, -g));
  for (int j = 1; j <= count; ++j)
    edges.push_back(j == count ? b : a + j * step);
  return PanelMesh(std::move(edges));
}

PanelMesh PanelMesh::refined() const
{
  std::vector<double> edges;
  edges.reserve(2 * edges_.size());
  for (std::size_t j = 0; j + 1 < edges_.size(); ++j)
  {
    edges.push_back(edges_[j]);
    edges.push_back(0.5 * (edges_[j] + edges_[j + 1]));
  }
  edges.push_back(edges_.back());
  return PanelMesh(std::move(edges));
}

std::vector<double> integrate_adaptive(const VectorIntegrand &f, std::span<const double> breaks,
                                       std::size_t components, const AdaptiveOptions &opt)
{
  if (breaks.size() < 2)
    throw Error(ErrorKind::Input, "integration needs at least one interval");
  const auto &rule = panel_rule();
  std::vector<double> prev, cur(components), vals(components);
  std::size_t panels = std::max(1, opt.initial_panels);
  const std::size_t intervals = breaks.size() - 1;
  while (true)
  {
    std::fill(cur.begin(), cur.end(), 0.0);
    for (std::size_t iv = 0; iv < intervals; ++iv)
    {
      double a = breaks[iv], b = breaks[iv + 1];
      double step = (b - a) / panels;
      for (std::size_t j = 0; j < panels; ++j)
      {
        double pa = a + j * step;
        double c = pa + 0.5 * step, h = 0.5 * step;
        for (int i = 0; i < kPanelOrder; ++i)
        {
          f(c + h * rule.x[i], vals);
          for (std::size_t k = 0; k < components; ++k)
            cur[k] += h * rule.w[i] * vals[k];
        }
      }
    }
    if (!prev.empty())
    {
      double scale = 0.0;
      for (double v : cur)
        scale = std::max(scale, std::abs(v));
      double change = 0.0;
      for (std::size_t k = 0; k < components; ++k)
        change = std::max(change, std::abs(cur[k] - prev[k]));
      if (change <= opt.rel_tol * scale)
        return cur;
    }
    prev = cur;
    if (2 * panels * intervals * kPanelOrder > opt.max_nodes)
      throw Error(ErrorKind::Accuracy, "adaptive quadrature did not converge within node cap");
    panels *= 2;
  }
}

double integrate_adaptive(const std::function<double(double)> &f,
                          std::span<const double> breaks, const AdaptiveOptions &opt)
{
  auto vf = [&](double x, std::span<double> out) { out[0] = f(x); };
  return integrate_adaptive(vf, breaks, 1, opt)[0];
}

}  // namespace helmlab::quad
