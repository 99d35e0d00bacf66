#pragma once

#include <helmlab/diskmodal.hpp>
#include <helmlab/halfspace.hpp>
#include <helmlab/normkit.hpp>

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace helmlab::est
{

// a + b p, with p the estimate parameter (r, or s for the H^{-s} corollary)
struct Affine
{
  double a = 0.0;
  double b = 0.0;
  double at(double p) const { return a + b * p; }
};

enum class Target
{
  Solution,
  Trace,
  NormalDerivative,
  Datum,
  Source
};

const char *to_string(Target t);

struct Term
{
  Affine exponent;
  norms::NormId norm;
  Target target;
  Affine order;  // Sobolev order for Hs_Gamma
};

enum class Problem
{
  NeumannH,
  DirichletH,
  NeumannSource,
  DirichletSource,
  HalfNeumann,
  HalfDirichlet
};

enum class RegimeKind
{
  Real,           // lambda real nonzero
  Complex,        // Re lambda > 0 (real included)
  RealOrComplex,  // same set as Complex, kept for the anchor
  Zero            // lambda = 0
};

struct ParamRange
{
  std::string name;      // "r" or "s"
  double lo = 0.0;       // exclusive unless lo_closed
  double hi = 0.0;       // exclusive
  bool lo_closed = false;
  bool bounded_below = false;
  std::vector<double> eval;  // representative points
};

struct EstimateSpec
{
  std::string id;
  Problem problem;
  std::vector<Term> lhs;
  std::vector<Term> rhs;
  RegimeKind regime;
  // Nonzero-mean data only with |lambda| >= lambda0 (real case); at lambda = 0 mean
  // zero is mandatory.
  bool mean_zero_required = false;
  std::optional<ParamRange> param;
  std::vector<norms::NormId> surrogate_flags;
  std::string anchor;
  std::string note;
  // Explicit constant of the half-space bounds (sup_Q <= constant).
  std::optional<double> explicit_constant;
  // Dominant-term slopes must match the predicted exponents within kSlopeTol.
  bool slopes_enforced = false;
};

inline constexpr double kSlopeTol = 0.05;

struct OutOfScope
{
  std::string anchor;
  std::string reason;
};

const std::vector<EstimateSpec> &registry();
const std::vector<OutOfScope> &out_of_scope();
const EstimateSpec &find_spec(const std::string &id);

// Theorem / remark anchors that must each map to a spec or an out-of-scope record.
const std::vector<std::string> &anchor_list();

// Datum for one grid point: circle data, modal source or line data.
struct Datum
{
  std::string id;
  std::optional<disk::CircleData> circle;
  std::optional<disk::ModalSource> source;
  std::optional<halfspace::LineData> line;
  int scale = 0;  // highest angular mode; the asymptotic window starts at 10 * max(1, scale)

  static Datum mode(int n);                  // e^{i n theta}
  static Datum circle_data(std::string id, disk::CircleData g);
  static Datum source_mode(int n);           // r^{|n|} e^{i n theta}
  static Datum random_circle(std::uint64_t seed, int max_mode = 8);
  static Datum line_data(const halfspace::LineData &d);
};

struct Evaluation
{
  double Q = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<double> lhs_norms;  // raw norms, one per lhs term
  std::vector<double> rhs_norms;
};

// Caches solutions and norm reports across specs that share (problem, lambda, datum).
class Evaluator
{
public:
  Evaluator();
  ~Evaluator();
  Evaluator(const Evaluator &) = delete;
  Evaluator &operator=(const Evaluator &) = delete;

  Evaluation evaluate(const EstimateSpec &spec, const Frequency &lambda, const Datum &data,
                      double p = 0.0);
  void clear();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Throws a regime error if (lambda, data) is outside the estimate regime.
void check_admissible(const EstimateSpec &spec, const Frequency &lambda, const Datum &data,
                      double lambda0 = disk::kDefaultLambda0);

double evaluate_estimate(const EstimateSpec &spec, const Frequency &lambda, const Datum &data,
                         double p = 0.0);

struct Fit
{
  double slope = 0.0;
  double stderr_ = 0.0;
};

// least squares of log value against log |lambda|; needs >= 6 positive points
Fit fit_exponent(const std::vector<std::pair<double, double>> &series);

struct SweepPoint
{
  Frequency lambda;
  std::string data_id;
  double p = 0.0;
  double Q = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<double> lhs_norms;
};

struct TermFit
{
  std::string data_id;
  double ray = 0.0;  // arg lambda of the series
  std::size_t term = 0;
  double slope = 0.0;
  double stderr_ = 0.0;
  double predicted = 0.0;  // -exponent + dominant rhs exponent at large |lambda|
  double p = 0.0;
  std::size_t count = 0;
  bool dominant = false;     // largest LHS term at the top of the series
  bool asymptotic = false;   // fitted on |lambda| >= 10 * max(1, scale)
};

struct SweepResult
{
  std::string id;
  std::vector<SweepPoint> points;
  double sup_Q = 0.0;
  std::vector<TermFit> fits;
  double budget = 0.0;
  std::optional<double> golden;
  bool pass = false;
};

struct LambdaGrid
{
  double t_min = 10.0;
  double t_max = 1000.0;
  int count = 20;
  std::vector<double> rays{0.0};  // arg lambda
  std::vector<Frequency> points() const;
};

std::vector<double> logspace(double lo, double hi, int count);

SweepResult sweep(const EstimateSpec &spec, const std::vector<Frequency> &lambdas,
                  const std::vector<Datum> &data, const std::vector<double> &params,
                  Evaluator *cache = nullptr);

// Frozen grid for a spec; seed picks the random circle family.
struct GoldenGrid
{
  std::vector<Frequency> lambdas;
  std::vector<Datum> data;
  std::vector<double> params;
};

GoldenGrid golden_grid(const EstimateSpec &spec, std::uint64_t seed = 0);
std::optional<double> golden_value(const std::string &id);
inline constexpr double kBudgetFactor = 10.0;
inline constexpr double kRegressionFactor = 1.05;

// sweep over the golden grid with budget and regression checks
SweepResult golden_sweep(const EstimateSpec &spec, std::uint64_t seed = 0,
                         Evaluator *cache = nullptr);

// Sub-grids with their own frozen sup_Q, keyed "<id>|<grid>".
struct NamedGrid
{
  std::string key;
  std::string spec_id;
  GoldenGrid grid;
};

// dirichlet-real on logspace(1, 1e3, 20) x e^{in theta}, n in {0, 1, 2, 4, ..., 64}
NamedGrid dirichlet_modes_grid();
// neumann-complex-r at r = 0.45 on the rays +-(pi/2 - 0.05), t in logspace(1, 1e3, 12)
NamedGrid complex_edge_grid();
SweepResult named_sweep(const NamedGrid &g, Evaluator *cache = nullptr);

// max over the points of |s_n(lambda)| / (|lambda| + (1 + n^2)^{1/2})
double dtn_continuity_ratio(const std::vector<Frequency> &lambdas, const std::vector<int> &modes);

using Rational = boost::rational<std::int64_t>;

enum class BootstrapKind
{
  NeumannComplex,
  SourceEnergy
};

Rational bootstrap_sequence(BootstrapKind kind, int k);

// slope of ||u||_{L2} against lambda on a real grid in (0, 0.5]
Fit obstruction_probe(const disk::CircleData &h, const std::vector<double> &lambdas);

// neumann-real Q along h = e^{i n theta}, n = round(|lambda|)
std::vector<SweepPoint> sharpness_probe(const std::vector<double> &lambdas);

}  // namespace helmlab::est
