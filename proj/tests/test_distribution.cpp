#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "golden.hpp"
#include "nncc/distribution.hpp"
#include "nncc/geometry.hpp"
#include "nncc/montecarlo.hpp"
#include "oracles.hpp"

using namespace nncc;

namespace {

LinearParams ppp_params(double rho = 1e-4, double rate = 1e7) {
  SystemParams s;
  s.rho = rho;
  s.rate = rate;
  return validate(s);
}

DistributionContext ppp_ctx() { return make_distribution_context(ppp_params(), 2000.0); }

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("quadratic form") {
  const auto ctx = ppp_ctx();
  const auto& q = ctx.form;
  CHECK(rel_close(q.a, golden::ppp::kA, 1e-12));
  CHECK(rel_close(q.beta, golden::ppp::kBeta, 1e-12));
  CHECK(rel_close(q.c0, golden::ppp::kC0, 1e-12));
  CHECK(rel_close(support_infimum(q), golden::ppp::kInfimum, 1e-12));

  const auto lp = ppp_params();
  for (double r : {0.0, 3.0, 80.0, 400.0}) {
    for (double th : {-1.5, 0.0, 1.0, kPi, 4.5}) {
      const auto b = nncc_power_breakdown(make_geometry(2000.0, r, th), lp);
      CHECK(rel_close(q(r, th), b.total_nncc, 1e-9));
    }
  }
}

TEST_CASE("power roots") {
  const auto& q = ppp_ctx().form;
  const double th_neg = 2.5, th_pos = 0.4;
  auto rp = power_roots(q.c0, th_neg, q);
  REQUIRE(rp);
  CHECK(std::abs(rp->r_small) < 1e-9);
  CHECK(rel_close(rp->r_large, -q.b(th_neg) / q.a, 1e-12));
  rp = power_roots(q.c0, th_pos, q);
  REQUIRE(rp);
  CHECK(rel_close(rp->r_small, -q.b(th_pos) / q.a, 1e-12));
  CHECK(std::abs(rp->r_large) < 1e-9);
  const double q1 = 0.5 * (support_infimum(q) + q.c0);
  CHECK_FALSE(power_roots(q1, kPi / 2.0, q));
  rp = power_roots(q1, 0.0, q);
  REQUIRE(rp);
  CHECK(rp->r_large < 0.0);

  RandomStream s(12, 0);
  for (int i = 0; i < 5000; ++i) {
    const double p = support_infimum(q) * (1.0 + 3.0 * s.uniform());
    const double th = kThetaMin + 2.0 * kPi * s.uniform();
    const auto roots = power_roots(p, th, q);
    if (!roots) continue;
    REQUIRE(roots->r_small <= roots->r_large);
    for (double r : {roots->r_small, roots->r_large}) {
      const double res = q.a * r * r + q.b(th) * r + q.c0 - p;
      REQUIRE(std::abs(res) <= 1e-7 * p);
    }
  }
}

TEST_CASE("support infimum matches a grid minimum") {
  const auto& q = ppp_ctx().form;
  double best = INFINITY;
  for (double th = kThetaMin; th < kThetaMax; th += 1e-3) {
    for (double r = 0.0; r < 10.0; r += 0.01) best = std::min(best, q(r, th));
  }
  CHECK(best >= support_infimum(q));
  CHECK(rel_close(best, support_infimum(q), 1e-8));
  double bmin = INFINITY;
  for (double th = kThetaMin; th < kThetaMax; th += 1e-4) bmin = std::min(bmin, q1_lower_boundary(th, q));
  CHECK(rel_close(bmin, support_infimum(q), 1e-12));
}

TEST_CASE("reference CDF against high-precision values") {
  const auto ctx = ppp_ctx();
  CHECK(std::abs(cdf_reference(golden::ppp::kC0, ctx) - golden::ppp::kCdfAtC0) < 1e-9);
  CHECK(std::abs(cdf_reference(golden::ppp::kQ1Mid, ctx) - golden::ppp::kCdfAtQ1Mid) < 1e-9);
  CHECK(std::abs(cdf_reference(0.2, ctx) - golden::ppp::kCdfAt02) < 1e-9);
  CHECK(std::abs(cdf_reference(0.3, ctx) - golden::ppp::kCdfAt03) < 1e-9);
  CHECK(cdf_reference(0.5 * golden::ppp::kInfimum, ctx) == 0.0);
  CHECK(cdf_reference(0.0, ctx) == 0.0);
  CHECK(std::abs(cdf_reference(50.0, ctx) - 1.0) < 1e-9);
  CHECK(rel_close(pdf_reference(golden::ppp::kQ1Mid, ctx), golden::ppp::kPdfAtQ1Mid, 1e-7));
  CHECK(rel_close(pdf_reference(0.2, ctx), golden::ppp::kPdfAt02, 1e-7));
}

TEST_CASE("two-branch closed forms") {
  const auto ctx = ppp_ctx();
  const double pmin = support_infimum(ctx.form);
  CHECK(std::abs(cdf_closed_form(pmin, ctx)) < 1e-6);
  CHECK(cdf_closed_form(0.9 * pmin, ctx) == 0.0);
  // Below c0 both readings coincide.
  CHECK(std::abs(cdf_closed_form(golden::ppp::kQ1Mid, ctx) - golden::ppp::kCdfAtQ1Mid) < 1e-9);
  CHECK(rel_close(pdf_closed_form(golden::ppp::kQ1Mid, ctx), golden::ppp::kPdfAtQ1Mid, 1e-7));
  // Above c0 the closed-form CDF carries F(c0) on top of the probability.
  const double fc0 = golden::ppp::kCdfAtC0;
  CHECK(std::abs(cdf_closed_form(0.2, ctx) - (golden::ppp::kCdfAt02 + fc0)) < 1e-9);
  CHECK(std::abs(cdf_closed_form(50.0, ctx) - (1.0 + fc0)) < 1e-9);
  CHECK(rel_close(pdf_closed_form(0.2, ctx), golden::ppp::kPdfAt02, 1e-7));
}

TEST_CASE("densities are non-negative across the support") {
  const auto ctx = ppp_ctx();
  const double lo = support_infimum(ctx.form), hi = upper_support_point(ctx);
  for (int i = 0; i < 200; ++i) {
    const double p = lo + (hi - lo) * (i + 0.5) / 200.0;
    CHECK(pdf_closed_form(p, ctx) >= 0.0);
    CHECK(pdf_reference(p, ctx) >= 0.0);
  }
}

TEST_CASE("distribution grid and discrepancy report") {
  const auto ctx = ppp_ctx();
  const auto res = evaluate_distribution(ctx);
  REQUIRE(res.p_grid.size() == 256);
  CHECK(res.p_grid.front() == support_infimum(ctx.form));
  CHECK(cdf_reference(res.p_grid.back(), ctx) >= 1.0 - 1e-6);
  for (std::size_t i = 0; i < res.p_grid.size(); ++i) {
    CHECK(res.cdf_reference[i] >= 0.0);
    CHECK(res.cdf_reference[i] <= 1.0);
    if (i) {
      CHECK(res.p_grid[i] > res.p_grid[i - 1]);
      CHECK(res.cdf_reference[i] >= res.cdf_reference[i - 1]);
    }
  }
  CHECK(rel_close(res.expected_power, golden::ppp::kMeanPower, 1e-9));

  const auto d = compare_with_reference(res, ctx);
  CHECK(d.fd_points >= 50);
  CHECK(d.max_fd_gap_reference < 1e-4);
  CHECK(std::abs(d.pdf_mass_minus_one) < 1e-3);
  CHECK(std::abs(d.reference_mass_at_junction - golden::ppp::kCdfAtC0) < 1e-9);
  CHECK(std::abs(d.max_cdf_gap - golden::ppp::kCdfAtC0) < 1e-8);
  CHECK(d.q1_max_cdf_gap < 1e-9);
  MESSAGE("closed-form cdf vs finite-difference gap: " << d.max_fd_gap_closed_form);
}

TEST_CASE("reference CDF is stable under tighter quadrature") {
  auto loose = ppp_ctx();
  auto tight = loose;
  loose.tol = {1e-9, 1e-9};
  tight.tol = {1e-11, 1e-11};
  const double lo = support_infimum(loose.form);
  for (double p : {lo * (1 + 1e-6), golden::ppp::kQ1Mid, golden::ppp::kC0, 0.13, 0.2, 0.4, 0.7}) {
    CAPTURE(p);
    CHECK(std::abs(cdf_reference(p, loose) - cdf_reference(p, tight)) < 1e-8);
  }
}

TEST_CASE("expectation: moments and quadrature") {
  const std::vector<std::array<double, 2>> sets{
      {1e-5, 150.0}, {1e-4, 500.0}, {1e-3, 1000.0}, {1e-2, 3000.0}, {3e-4, 2000.0}};
  for (const auto& [rho, r1] : sets) {
    CAPTURE(rho);
    const auto ctx = make_distribution_context(ppp_params(rho, 1e5), r1);
    CHECK(rel_close(expected_power(ctx), expected_power_moments(ctx), 1e-9));
  }
  const auto ctx = ppp_ctx();
  CHECK(rel_close(expected_power_moments(ctx), golden::ppp::kMeanPower, 1e-12));
  CHECK(rel_close(expected_power_conventional(ctx), golden::ppp::kMeanPowerConventional, 1e-12));

  // Dense users collapse the partner onto U1.
  const auto dense = make_distribution_context(ppp_params(1e6), 2000.0);
  CHECK(rel_close(expected_power_moments(dense), dense.form.c0, 1e-6));
  const double eps = make_outage_targets(1e-3).eps_total;
  const double eta = power_coefficients(ppp_params(1e6)).eta;
  CHECK(rel_close(energy_efficiency(dense), 1e7 / (eps * eta * 2000.0 * 2000.0), 1e-6));
}

TEST_CASE("expectation: Monte Carlo") {
  const auto lp = ppp_params();
  const auto ctx = make_distribution_context(lp, 2000.0);
  const auto mc = sample_power_distribution(1'000'000, 1e-4, 2000.0, lp, RandomStream(3, 0));
  double sum = 0.0, sum2 = 0.0;
  for (double x : mc.sorted_samples) {
    sum += x;
    sum2 += x * x;
  }
  const double n = 1e6;
  const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - expected_power_moments(ctx)) < 3.0 * se);
  CHECK(mc.sample_min >= support_infimum(ctx.form));

  // Median through the closed-form CDF; the deviation from 1/2 is reported.
  const double median = mc.sorted_samples[mc.sorted_samples.size() / 2];
  const double at_median = cdf_closed_form(median, ctx);
  MESSAGE("closed-form cdf at the sample median: " << at_median);
  CHECK(std::abs(cdf_reference(median, ctx) - 0.5) < 0.005);
  CHECK(std::abs(at_median - 0.5 - golden::ppp::kCdfAtC0) < 0.005);
}

TEST_CASE("energy efficiency") {
  const auto a = make_distribution_context(ppp_params(1e-4, 1e5), 1000.0);
  const auto b = make_distribution_context(ppp_params(1e-4, 2e5), 1000.0);
  CHECK(energy_efficiency(b) != doctest::Approx(2.0 * energy_efficiency(a)));
  CHECK(rel_close(energy_efficiency(a), 2e5 / expected_power_moments(a), 1e-15));
  for (double r1 = 500.0; r1 <= 3000.0; r1 += 250.0) {
    const auto c = make_distribution_context(ppp_params(1e-4, 1e5), r1);
    CHECK(energy_efficiency(c) > energy_efficiency_conventional(c));
  }
}
