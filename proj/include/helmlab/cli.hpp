#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace helmlab::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitAccuracy = 4;
inline constexpr int kSchemaVersion = 1;

struct GridSpec
{
  double t_min = 1.0;
  double t_max = 1000.0;
  int count = 20;
  std::vector<double> rays{0.0};

  bool operator==(const GridSpec &) const = default;
};

// Commands: verify-identities, sweep, specfun-selftest, obstruction, bootstrap, report.
struct RunConfig
{
  std::string command = "sweep";
  std::vector<std::string> estimates;  // empty: the whole registry
  std::optional<GridSpec> grid;        // empty: golden grids
  std::vector<int> modes;              // data family e^{in theta}; empty: golden families
  std::vector<double> r_values;        // empty: the registry's evaluation points
  std::string output_dir = "helmlab-out";
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  std::string kind = "neumann-complex";  // bootstrap
  int k = 3;                             // bootstrap
  std::string artifacts;                 // report

  bool operator==(const RunConfig &) const = default;
};

std::string config_to_json(const RunConfig &c);
RunConfig config_from_json(const std::string &text);
// Throws an input error on an invalid configuration.
void validate(const RunConfig &c);

// Reads --config first, then applies the flags on top.
RunConfig parse_command_line(int argc, const char *const *argv);

struct RunResult
{
  int exit_code = kExitOk;
  std::string summary;  // JSON
  std::string text;     // stdout
};

RunResult run(const RunConfig &c);

// Table from the summary.json of a previous run; throws an input error when missing.
std::string render_report(const std::string &artifacts_dir);

struct SelftestResult
{
  double wronskian = 0.0;
  double recurrence = 0.0;
  double conjugation = 0.0;
  std::size_t points = 0;
};

// n in {0, 1, 2, 3, 5, ..., 128}, |z| <= 500, |arg z| <= pi/2 - 0.05
SelftestResult specfun_selftest();

struct DtnResult
{
  double symmetry = 0.0;       // relative, real lambda
  double continuity = 0.0;     // worst ratio over the sweep grids
  double steklov_error = 0.0;  // max |s_n(0) - |n||
};

DtnResult dtn_checks();

int main_entry(int argc, const char *const *argv);

}  // namespace helmlab::cli
