// nncc: figure datasets, parameter sweeps and validation reports.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "nncc/errors.hpp"
#include "nncc/experiment.hpp"
#include "nncc/params.hpp"

namespace {

constexpr int kExitFailedChecks = 1;
constexpr int kExitError = 2;

struct Common {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> samples;
  unsigned workers = 0;
  std::optional<double> r1;
  std::optional<double> r;
  std::map<std::string, double> overrides;
};

void apply_common(const Common& c, nncc::ExperimentSpec& spec) {
  for (const auto& [key, value] : c.overrides) nncc::set_param(spec.params, key, value);
  if (c.seed) spec.seed = *c.seed;
  if (c.trials) spec.n_trials = *c.trials;
  if (c.samples) spec.n_samples = *c.samples;
  if (c.r1) spec.r1 = *c.r1;
  if (c.r) spec.r = *c.r;
  spec.workers = c.workers;
  spec.out = c.out;
}

// Writes to --out, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("failed writing output file '" + path + "'");
}

std::string csv_text(const std::vector<nncc::SweepRow>& rows) {
  std::ostringstream os;
  nncc::write_csv(os, rows);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy and outage toolkit for nearest-neighbour cooperative uplinks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI file (key = value)");

  Common common;
  app.add_option("--out", common.out, "Output file (default stdout)");
  app.add_option("--seed", common.seed, "Random seed");
  app.add_option("--trials", common.trials, "Monte Carlo trials per point")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--samples", common.samples, "PPP samples per validation check");
  app.add_option("--workers", common.workers, "Worker threads (0 = all cores)");
  app.add_option("--r1", common.r1, "U1-BS distance [m]");
  app.add_option("--r", common.r, "Fixed U1-U2 distance [m]; PPP nearest neighbour if omitted");

  std::map<std::string, std::optional<double>> param_opts;
  for (const auto& f : nncc::param_fields()) {
    const std::string name(f.name);
    param_opts[name];
    app.add_option("--" + name, param_opts[name], std::string(f.description))
        ->group("System parameters");
  }

  int figure = 0;
  auto* fig = app.add_subcommand("figure", "Dataset behind figure 3, 4, 5 or 6");
  fig->add_option("number", figure, "Figure number")->required()->check(CLI::IsMember({3, 4, 5, 6}));

  nncc::SweepAxis axis;
  bool log_spacing = false;
  auto* sweep = app.add_subcommand("sweep", "Sweep one variable and emit a CSV dataset");
  sweep->add_option("--var", axis.variable, "r1 | r | rho | p_out_target | rate")->required();
  sweep->add_option("--min", axis.min, "Lower end of the range")->required();
  sweep->add_option("--max", axis.max, "Upper end of the range")->required();
  sweep->add_option("--count", axis.count, "Number of grid points")->required();
  sweep->add_flag("--log", log_spacing, "Logarithmic spacing");

  double eta_scale = 1.0;
  auto* val = app.add_subcommand("validate", "Cross-validate closed forms against simulation");
  val->add_option("--eta-scale", eta_scale, "Scale the cellular coefficient (fault injection)")
      ->group("");

  CLI11_PARSE(app, argc, argv);

  for (const auto& [name, v] : param_opts) {
    if (v) common.overrides[name] = *v;
  }

  try {
    if (fig->parsed()) {
      auto spec = nncc::figure_spec(figure);
      apply_common(common, spec);
      emit(spec.out, csv_text(nncc::run_sweep(spec)));
      return 0;
    }
    if (sweep->parsed()) {
      nncc::ExperimentSpec spec;
      spec.kind = nncc::ExperimentKind::Sweep;
      axis.spacing = log_spacing ? nncc::Spacing::Log : nncc::Spacing::Linear;
      spec.axis = axis;
      apply_common(common, spec);
      emit(spec.out, csv_text(nncc::run_sweep(spec)));
      return 0;
    }
    nncc::ExperimentSpec spec;
    spec.kind = nncc::ExperimentKind::Validate;
    spec.r1 = 1000.0;
    spec.eta_scale = eta_scale;
    apply_common(common, spec);
    const auto rep = nncc::validate_report(spec);
    emit(spec.out, rep.text);
    if (!rep.passed) {
      std::cerr << "nncc: validation failed\n";
      return kExitFailedChecks;
    }
    return 0;
  } catch (const nncc::BudgetError& e) {
    std::cerr << "nncc: refused: " << e.what() << '\n';
  } catch (const nncc::ValidationError& e) {
    std::cerr << "nncc: invalid parameter " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "nncc: error: " << e.what() << '\n';
  }
  return kExitError;
}
