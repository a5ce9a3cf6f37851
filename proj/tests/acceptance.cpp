// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "nncc/distribution.hpp"
#include "nncc/experiment.hpp"
#include "nncc/geometry.hpp"
#include "nncc/montecarlo.hpp"
#include "nncc/powermodel.hpp"
#include "oracles.hpp"

using namespace nncc;

namespace {

struct Verdict {
  int id;
  bool ok;
  std::string what, detail;
};
std::vector<Verdict> verdicts;

void verdict(int id, bool ok, const std::string& what, const std::string& detail) {
  verdicts.push_back({id, ok, what, detail});
}

std::string num(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

LinearParams params_with(double p_out = 1e-3, double rate = 1e5, double rho = 1e-4) {
  SystemParams s;
  s.p_out_target = p_out;
  s.rate = rate;
  s.rho = rho;
  return validate(s);
}

double sigmas(const RateEstimate& e, double target) {
  return std::abs(e.value() - target) / std::sqrt(target * (1.0 - target) / e.trials);
}

void inversion_closure() {
  double worst = 0.0;
  for (double p : {1e-4, 1e-3, 1e-2}) {
    const auto lp = params_with(p);
    const double zeta = short_range_coeff(lp);
    for (double r : {1.0, 20.0, 100.0}) {
      worst = std::max(worst, std::abs(short_range_outage_prob(zeta * r * r, r, lp) - p));
    }
  }
  verdict(1, worst <= 1e-12, "short-range inversion closure",
          "max residual " + num("%.3e", worst) + " <= 1e-12");
}

void per_link_target() {
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double p = 0.2 * i / 100.0;
    worst = std::max(worst, std::abs(per_link_outage_nncc(p) - oracle::composite_root(p)));
  }
  const double at = per_link_outage_nncc(1e-3);
  const bool ok = worst <= 1e-10 && std::abs(at - 0.029743) <= 1e-6;
  verdict(2, ok, "cooperative per-link target vs bisection",
          "max gap " + num("%.3e", worst) + " <= 1e-10; value(1e-3) " + num("%.9f", at) +
              " = 0.029743 +- 1e-6");
}

void outage_statistics() {
  constexpr std::uint64_t n = 10'000'000;
  const auto lp = params_with();
  const auto geom = make_geometry(1000.0, 20.0, kPi / 4.0);
  const auto t = make_outage_targets(1e-3);
  const auto rep = estimate_outage(n, geom, lp, RandomStream(2024, 1));

  const double pc = per_link_outage_conventional(1e-3);
  const double conv_sig = sigmas(rep.conventional_outage, 1e-3);
  verdict(3, std::abs(pc - 5.00125e-4) <= 1e-9 && conv_sig <= 3.0,
          "conventional per-link target and simulated outage",
          "value " + num("%.12e", pc) + " = 5.00125e-4 +- 1e-9; outage " +
              num("%.6e", rep.conventional_outage.value()) + " at " + num("%.2f", conv_sig) +
              " sigma <= 3, 1e7 trials");

  const double d_sig = sigmas(rep.delta0, t.eps_short);
  const double c_sig = sigmas(rep.composite_outage, 1e-3);
  verdict(5, d_sig <= 3.0 && c_sig <= 3.0, "protocol statistics",
          "Pr(delta=0) " + num("%.7f", rep.delta0.value()) + " at " + num("%.2f", d_sig) +
              " sigma; composite outage " + num("%.4e", rep.composite_outage.value()) + " at " +
              num("%.2f", c_sig) + " sigma; per-message D1 " +
              num("%.4e", rep.d1_outage.value()) + ", D2 " + num("%.4e", rep.d2_outage.value()) +
              " (reported)");
}

void quadratic_identity() {
  const auto lp = params_with();
  const auto c = power_coefficients(lp);
  const double eps = make_outage_targets(1e-3).eps_total;
  RandomStream s(77, 0);
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double r = 1000.0 * s.uniform();
    const double th = kThetaMin + 2.0 * kPi * s.uniform();
    const double r1 = 1.0 + 5000.0 * s.uniform();
    const double r2sq = r * r + r1 * r1 + 2.0 * r1 * r * std::cos(th);
    const double per_link = 2.0 * c.zeta * r * r + eps * c.eta * (r1 * r1 + r2sq);
    const double quad = nncc_total_quadratic(r, th, r1, c, eps);
    const double lib = nncc_power_breakdown(make_geometry(r1, r, th), lp).total_nncc;
    worst = std::max({worst, std::abs(quad - per_link) / per_link,
                      std::abs(lib - per_link) / per_link});
  }
  verdict(4, worst <= 1e-9, "per-link total equals the (r, theta) quadratic",
          "max rel gap " + num("%.3e", worst) + " <= 1e-9 over 1e4 triples");
}

void distribution_ground_truth() {
  constexpr std::uint64_t n = 1'000'000;
  const auto lp = params_with(1e-3, 1e7, 1e-4);
  const auto ctx = make_distribution_context(lp, 2000.0);
  const auto mc = sample_power_distribution(n, 1e-4, 2000.0, lp, RandomStream(2024, 2));
  const auto cdf = parallel_map(mc.sorted_samples, [&](double p) { return cdf_reference(p, ctx); });
  const double ks = ks_distance_values(mc.sorted_samples, cdf);
  verdict(6, ks < 0.005, "empirical power CDF vs reference CDF",
          "KS " + num("%.3e", ks) + " < 5e-3, 1e6 samples");
}

void expectation_agreement() {
  const std::vector<std::array<double, 2>> sets{
      {1e-5, 150.0}, {1e-4, 500.0}, {1e-3, 1000.0}, {1e-2, 3000.0}, {3e-4, 2000.0}};
  double worst_rel = 0.0, worst_se = 0.0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto [rho, r1] = sets[k];
    const auto lp = params_with(1e-3, 1e5, rho);
    const auto ctx = make_distribution_context(lp, r1);
    const auto c = power_coefficients(lp);
    const double eps = make_outage_targets(1e-3).eps_total;
    const double closed =
        (2.0 * c.zeta + eps * c.eta) / (kPi * rho) + 2.0 * eps * c.eta * r1 * r1;
    const double quad = expected_power(ctx);
    const auto mc = sample_power_distribution(1'000'000, rho, r1, lp, RandomStream(2024, 10 + k));
    worst_rel = std::max(worst_rel, std::abs(closed - quad) / closed);
    worst_se = std::max(worst_se, std::abs(mc.mean_energy - closed) / mc.energy_stderr);
  }
  verdict(7, worst_rel <= 1e-9 && worst_se <= 3.0, "expectation triple agreement",
          "moments vs quadrature " + num("%.3e", worst_rel) + " <= 1e-9; Monte Carlo " +
              num("%.2f", worst_se) + " stderr <= 3; 5 sets, 1e6 samples each");
}

void figure_shapes() {
  bool ok = true;
  auto f3 = figure_spec(3);
  f3.n_trials = kMinTrials;
  std::size_t points = 0;
  for (const auto& row : run_sweep(f3)) {
    if (row.value < 500.0) continue;
    ++points;
    ok &= row.e_nncc_analytic < row.e_conv_analytic && row.e_nncc_mc < row.e_conv_analytic;
  }
  auto f4 = figure_spec(4);
  f4.n_trials = kMinTrials;
  for (const auto& row : run_sweep(f4)) {
    if (row.value >= 500.0) ok &= row.ee_nncc > row.ee_conv;
  }
  for (int fig : {5, 6}) {
    auto f = figure_spec(fig);
    f.n_trials = kMinTrials;
    const auto rows = run_sweep(f);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      ok &= rows[i].e_nncc_analytic < rows[i - 1].e_nncc_analytic;
    }
  }
  verdict(9, ok && points > 0, "figure dataset shapes",
          "fig3 cooperative < conventional on " + std::to_string(points) +
              " points in [500, 3000] m; fig4 efficiency reversed; fig5 decreasing in rho; "
              "fig6 decreasing in P_out");
}

bool has_finite_line(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  if (pos == std::string::npos) return false;
  const double v = std::strtod(text.c_str() + pos + key.size(), nullptr);
  return std::isfinite(v);
}

void report_and_reproducibility() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Validate;
  spec.seed = 2024;
  spec.n_trials = kMinTrials;
  spec.n_samples = kMinKsSamples;
  spec.workers = 1;
  const auto a = validate_report(spec);
  spec.workers = 3;
  const auto b = validate_report(spec);

  const bool has_report = a.text.find("[closed_form]") != std::string::npos &&
                          has_finite_line(a.text, "max_abs_cdf_closed_form_minus_reference") &&
                          has_finite_line(a.text, "pdf_closed_form_integral_minus_one");
  const auto ctx = make_distribution_context(params_with(1e-3, 1e7, 1e-4), 2000.0);
  const auto res = evaluate_distribution(ctx);
  const auto d = compare_with_reference(res, ctx);
  verdict(8, has_report && res.cdf_closed_form.size() == 256 && res.pdf_closed_form.size() == 256,
          "closed-form CDF/PDF report",
          "max |cdf_closed_form - cdf_reference| " + num("%.6e", d.max_cdf_gap) +
              "; integral of pdf_closed_form - 1 " + num("%.3e", d.pdf_mass_minus_one) +
              " (reported, no bound)");

  verdict(10, a.text == b.text, "validate report independent of worker count",
          "workers 1 vs 3, " + std::to_string(a.text.size()) + " bytes, " +
              (a.text == b.text ? "identical" : "different"));
}

}  // namespace

int main() {
  inversion_closure();
  per_link_target();
  outage_statistics();
  quadratic_identity();
  distribution_ground_truth();
  expectation_agreement();
  report_and_reproducibility();
  figure_shapes();
  std::sort(verdicts.begin(), verdicts.end(), [](auto& a, auto& b) { return a.id < b.id; });
  int failures = 0;
  for (const auto& v : verdicts) {
    std::printf("criterion %2d %s  %s  [%s]\n", v.id, v.ok ? "PASS" : "FAIL", v.what.c_str(),
                v.detail.c_str());
    failures += v.ok ? 0 : 1;
  }
  std::printf("%s: %d of %zu criteria failed\n", failures ? "FAIL" : "PASS", failures,
              verdicts.size());
  return failures ? 1 : 0;
}
