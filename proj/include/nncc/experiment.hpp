#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nncc/params.hpp"

namespace nncc {

enum class ExperimentKind { Figure3, Figure4, Figure5, Figure6, Sweep, Validate };
enum class Spacing { Linear, Log };

struct SweepAxis {
  std::string variable;  // r1 | r | rho | p_out_target | rate
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  Spacing spacing = Spacing::Linear;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Sweep;
  SweepAxis axis;
  SystemParams params;
  double r1 = 1000.0;       // m
  std::optional<double> r;  // fixed inter-user distance; PPP nearest neighbour if unset
  std::string out;          // output path, "-" or empty for stdout
  std::uint64_t seed = 1;
  std::uint64_t n_trials = 100'000;
  std::uint64_t n_samples = 1'000'000;  // validate: PPP power samples per check
  unsigned workers = 0;                 // 0 = hardware concurrency
  double eta_scale = 1.0;               // fault injection for validate
};

/// Raised when the requested Monte Carlo budget cannot support a bound.
class BudgetError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kKsBound = 0.005;
/// Samples needed for the 99% KS quantile 1.63/sqrt(n) to clear kKsBound.
inline constexpr std::uint64_t kMinKsSamples = 106'276;

/// Defaults for the figure datasets (sweep axis, geometry and radio setting).
ExperimentSpec figure_spec(int figure);

/// Throws ValidationError or BudgetError when the experiment cannot run.
void check_spec(const ExperimentSpec& spec);

std::vector<double> axis_values(const SweepAxis& axis);

struct SweepRow {
  std::string swept_var;
  double value = 0.0;
  double e_nncc_analytic = 0.0;
  double e_conv_analytic = 0.0;
  double e_nncc_mc = 0.0;
  double e_nncc_mc_stderr = 0.0;
  double ee_nncc = 0.0;
  double ee_conv = 0.0;
};

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "swept_var,value,e_nncc_analytic,e_conv_analytic,e_nncc_mc,e_nncc_mc_stderr,ee_nncc,ee_conv";

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::string text;
  std::vector<CheckResult> checks;
  bool passed = false;
};

/// Cross-validation of closed forms, quadrature and simulation.
ValidationReport validate_report(const ExperimentSpec& spec);

}  // namespace nncc
