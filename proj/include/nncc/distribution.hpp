#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nncc/params.hpp"
#include "nncc/powermodel.hpp"
#include "nncc/quadrature.hpp"

namespace nncc {

/// Cooperative total power as a quadratic in the inter-user distance r:
///   P(r, theta) = a r^2 + 2 beta cos(theta) r + c0.
struct QuadraticForm {
  double a = 0.0;     // 2 zeta + eps eta, W/m^2
  double beta = 0.0;  // eps eta r1, W/m
  double c0 = 0.0;    // 2 eps eta r1^2, W

  double b(double theta) const;
  double operator()(double r, double theta) const;
};

QuadraticForm make_quadratic_form(const PowerCoefficients& coeffs, double eps_total, double r1);

/// Real roots of a r^2 + b(theta) r + (c0 - p) = 0, r_small <= r_large.
/// delta_r is the half-discriminant sqrt((beta cos)^2 - a (c0 - p)).
struct RootPair {
  double delta_r = 0.0;
  double r_small = 0.0;
  double r_large = 0.0;
};

std::optional<RootPair> power_roots(double p, double theta, const QuadraticForm& q);

/// Everything the distribution kernels need for one (params, r1) setting.
struct DistributionContext {
  QuadraticForm form;
  double rho = 0.0;
  double r1 = 0.0;
  double rate = 0.0;
  double eta_conventional = 0.0;
  quad::Tolerance tol{1e-9, 1e-9};
};

DistributionContext make_distribution_context(const LinearParams& params, double r1);

/// Smallest attainable total power, c0 - beta^2 / a (at theta = pi, r = beta / a).
double support_infimum(const QuadraticForm& q);

/// Lower edge of the Q1 region for a given bearing: c0 - (beta cos)^2 / a.
double q1_lower_boundary(double theta, const QuadraticForm& q);

/// Two-branch closed-form CDF and PDF, evaluated as written. The Q2
/// CDF branch keeps its additive F(c0) term; these are reported against the
/// reference, not trusted.
double cdf_closed_form(double p, const DistributionContext& ctx);
double pdf_closed_form(double p, const DistributionContext& ctx);

/// CDF straight from P(total <= p): for every bearing integrate the
/// nearest-neighbour law over the admissible r-interval.
double cdf_reference(double p, const DistributionContext& ctx);

/// Density obtained by differentiating cdf_reference under the theta integral.
double pdf_reference(double p, const DistributionContext& ctx);

/// E[P] by 2-D quadrature over (r, theta).
double expected_power(const DistributionContext& ctx);

/// E[P] = a / (pi rho) + c0 from the moments of the nearest-neighbour law.
double expected_power_moments(const DistributionContext& ctx);

/// Non-cooperative counterpart, eta_C (2 r1^2 + 1 / (pi rho)).
double expected_power_conventional(const DistributionContext& ctx);

/// 2R / E[P] in bits per joule (unit-slot energy).
double energy_efficiency(const DistributionContext& ctx);
double energy_efficiency_conventional(const DistributionContext& ctx);

/// Smallest p with cdf_reference(p) >= 1 - tail_mass.
double upper_support_point(const DistributionContext& ctx, double tail_mass = 1e-6);

struct DistributionResult {
  std::vector<double> p_grid;
  std::vector<double> cdf_closed_form;
  std::vector<double> pdf_closed_form;
  std::vector<double> cdf_reference;
  double expected_power = 0.0;
  double energy_efficiency = 0.0;
};

/// Log-spaced grid from the support infimum to upper_support_point.
DistributionResult evaluate_distribution(const DistributionContext& ctx,
                                         std::size_t points = 256);

/// Where the two-branch closed forms depart from the reference.
struct ClosedFormDiscrepancy {
  double max_cdf_gap = 0.0;     // max |cdf_closed_form - cdf_reference| on the grid
  double max_cdf_gap_at = 0.0;  // p where it occurs
  double q1_max_cdf_gap = 0.0;  // same, on a linear grid over [infimum, c0]
  double pdf_mass_minus_one = 0.0;  // integral of pdf_closed_form out to tail mass 1e-14
  double reference_mass_at_junction = 0.0;  // F(c0)
  double cdf_closed_form_jump = 0.0;  // cdf_closed_form(c0+) - cdf_closed_form(c0)
  double pdf_closed_form_jump = 0.0;  // pdf_closed_form(c0+) - pdf_closed_form(c0-)
  double cdf_closed_form_limit = 0.0;  // cdf_closed_form at the top of the grid
  double max_fd_gap_closed_form = 0.0;      // max |FD(cdf_closed_form) - pdf_closed_form|, 1/W
  double max_fd_gap_reference = 0.0;  // max |FD(cdf_reference) - pdf_reference|, 1/W
  double pdf_peak = 0.0;              // max pdf_closed_form on the grid, 1/W
  std::size_t fd_points = 0;          // interior points used for the FD checks
};

ClosedFormDiscrepancy compare_with_reference(const DistributionResult& result,
                                          const DistributionContext& ctx);

}  // namespace nncc
