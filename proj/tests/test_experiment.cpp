#include <doctest.h>

#include <sstream>
#include <string>

#include "nncc/experiment.hpp"
#include "nncc/montecarlo.hpp"

using namespace nncc;

namespace {

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

ExperimentSpec small_sweep(const std::string& var, double lo, double hi, std::size_t n) {
  ExperimentSpec s;
  s.kind = ExperimentKind::Sweep;
  s.axis = {var, lo, hi, n, Spacing::Linear};
  s.n_trials = kMinTrials;
  s.r = 20.0;
  return s;
}

ExperimentSpec small_validate() {
  ExperimentSpec s;
  s.kind = ExperimentKind::Validate;
  s.n_trials = kMinTrials;
  s.n_samples = kMinKsSamples;
  return s;
}

template <class E, class F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("figure presets") {
  const auto f3 = figure_spec(3);
  CHECK(f3.axis.variable == "r1");
  CHECK(f3.r == 20.0);
  CHECK(f3.params.p_out_target == 1e-3);
  CHECK(f3.params.rate == 1e5);
  const auto f5 = figure_spec(5);
  CHECK(f5.axis.variable == "rho");
  CHECK(f5.r1 == 2000.0);
  CHECK_FALSE(f5.r.has_value());
  CHECK(f5.params.rate == 1e7);
  const auto f6 = figure_spec(6);
  CHECK(f6.axis.variable == "p_out_target");
  CHECK(f6.r1 == 150.0);
  CHECK(f6.params.rate == 1e6);
  CHECK_THROWS_AS(figure_spec(2), ValidationError);
}

TEST_CASE("experiment checks") {
  auto s = small_sweep("r1", 100.0, 200.0, 2);
  CHECK_NOTHROW(check_spec(s));
  s.axis.count = 1;
  CHECK_THROWS_AS(check_spec(s), ValidationError);
  s = small_sweep("r1", 200.0, 100.0, 5);
  CHECK_THROWS_AS(check_spec(s), ValidationError);
  s = small_sweep("altitude", 1.0, 2.0, 5);
  CHECK(message_of<ValidationError>([&] { check_spec(s); }).find("altitude") != std::string::npos);
  s = small_sweep("rho", 0.0, 1e-3, 5);
  s.axis.spacing = Spacing::Log;
  CHECK_THROWS_AS(check_spec(s), ValidationError);
  s = small_sweep("p_out_target", 0.5, 1.5, 3);
  CHECK_THROWS_AS(check_spec(s), ValidationError);

  s = small_sweep("r1", 100.0, 200.0, 2);
  s.n_trials = 10;
  const auto msg = message_of<BudgetError>([&] { check_spec(s); });
  CHECK(msg.find("10000") != std::string::npos);

  auto v = small_validate();
  v.n_trials = 10;
  CHECK(message_of<BudgetError>([&] { validate_report(v); }).find("10000") != std::string::npos);
  v = small_validate();
  v.n_samples = 1000;
  CHECK(message_of<BudgetError>([&] { validate_report(v); }).find("106276") != std::string::npos);
}

TEST_CASE("axis grids") {
  const auto lin = axis_values({"r", 1.0, 3.0, 3, Spacing::Linear});
  CHECK(lin == std::vector<double>{1.0, 2.0, 3.0});
  const auto lg = axis_values({"rho", 1e-5, 1e-2, 4, Spacing::Log});
  CHECK(lg.front() == 1e-5);
  CHECK(lg.back() == 1e-2);
  CHECK(lg[1] == doctest::Approx(1e-4));
}

TEST_CASE("sweeps") {
  auto s = small_sweep("r1", 500.0, 900.0, 2);
  const auto rows = run_sweep(s);
  CHECK(rows.size() == 2);

  s = small_sweep("r", 1.0, 100.0, 12);
  s.r1 = 800.0;
  auto r = run_sweep(s);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i].e_nncc_analytic > r[i - 1].e_nncc_analytic);

  s = small_sweep("rate", 1e4, 1e7, 10);
  s.axis.spacing = Spacing::Log;
  r = run_sweep(s);
  for (std::size_t i = 1; i < r.size(); ++i) {
    CHECK(r[i].e_nncc_analytic > r[i - 1].e_nncc_analytic);
    CHECK(r[i].e_conv_analytic > r[i - 1].e_conv_analytic);
  }
  for (const auto& row : r) {
    CHECK(std::abs(row.e_nncc_mc - row.e_nncc_analytic) < 4.0 * row.e_nncc_mc_stderr);
  }
}

TEST_CASE("CSV output") {
  auto s = small_sweep("r1", 100.0, 3000.0, 4);
  const auto text = csv(run_sweep(s));
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text == csv(run_sweep(s)));
  s.workers = 3;
  CHECK(text == csv(run_sweep(s)));
  CHECK(text.find("r1,3000,") != std::string::npos);

  std::vector<SweepRow> one{{"rho", 1.0 / 3.0, 2.0 / 3.0, 1e-20, 0, 0, 0, 0}};
  CHECK(csv(one).find("rho,0.333333333333,0.666666666667,1e-20,0,0,0,0\n") != std::string::npos);
}

TEST_CASE("figure trends") {
  auto f = figure_spec(3);
  f.n_trials = kMinTrials;
  for (const auto& row : run_sweep(f)) {
    if (row.value < 500.0) continue;
    CHECK(row.e_nncc_analytic < row.e_conv_analytic);
    CHECK(row.ee_nncc > row.ee_conv);
  }
  for (int fig : {5, 6}) {
    f = figure_spec(fig);
    f.n_trials = kMinTrials;
    const auto rows = run_sweep(f);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].e_nncc_analytic < rows[i - 1].e_nncc_analytic);
    }
  }
}

TEST_CASE("validation report") {
  auto v = small_validate();
  const auto a = validate_report(v);
  CHECK(a.passed);
  for (const char* section :
       {"[closure]", "[outage]", "[distribution]", "[expectation]", "[closed_form]", "[summary]"}) {
    CHECK(a.text.find(section) != std::string::npos);
  }
  CHECK(a.text.find("max_abs_cdf_closed_form_minus_reference") != std::string::npos);
  CHECK(a.text.find("pdf_closed_form_integral_minus_one") != std::string::npos);
  CHECK(a.text.find("ks_empirical_vs_closed_form") != std::string::npos);
  CHECK(a.text.find("d1_outage_rate") != std::string::npos);

  v.workers = 2;
  CHECK(validate_report(v).text == a.text);

  v.eta_scale = 2.0;
  const auto bad = validate_report(v);
  CHECK_FALSE(bad.passed);
  bool flagged = false;
  for (const auto& c : bad.checks) flagged |= c.name == "cellular_inversion_residual" && !c.passed;
  CHECK(flagged);
}
