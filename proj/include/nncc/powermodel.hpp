#pragma once

#include "nncc/geometry.hpp"
#include "nncc/params.hpp"

namespace nncc {

/// Outage budgets derived from the end-to-end target.
struct OutageTargets {
  double p_out = 0.0;
  double eps_short = 0.0;  // (1 - p_out)^2, both short-range decodes succeed
  double eps_total = 0.0;  // 1 + eps_short, expected number of uplink slots
  double p_out_nc = 0.0;   // per-cellular-link target, cooperative scheme
  double p_out_c = 0.0;    // per-link target, conventional scheme
};

OutageTargets make_outage_targets(double p_out);

/// Per-cellular-link outage x for the cooperative scheme: the root in [0, 1]
/// of eps x^2 + (1 - eps)(2x - x^2) = p_out with eps = (1 - p_out)^2.
double per_link_outage_nncc(double p_out);

/// Per-link outage for two independent uplinks: 1 - sqrt(1 - p_out).
double per_link_outage_conventional(double p_out);

/// Coefficients such that each short-range power is zeta r^2 and each
/// cellular power is eta r_i^2.
struct PowerCoefficients {
  double zeta = 0.0;  // W/m^2
  double eta = 0.0;   // W/m^2
};

/// Short-range coefficient meeting p_out_target on each exchange link.
double short_range_coeff(const LinearParams& params);

/// Cellular coefficient meeting per-link outage p_link. Pass
/// per_link_outage_conventional(p) for the non-cooperative scheme.
double cellular_coeff(const LinearParams& params, double p_link);

/// zeta and eta (at the cooperative per-link target) for `params`.
PowerCoefficients power_coefficients(const LinearParams& params);

struct PowerBreakdown {
  double p12 = 0.0;
  double p21 = 0.0;
  double p1b = 0.0;
  double p2b = 0.0;
  double total_nncc = 0.0;
  double total_conventional = 0.0;
};

/// Quadratic form of the cooperative total in (r, theta) for fixed r1.
double nncc_total_quadratic(double r, double theta, double r1, const PowerCoefficients& coeffs,
                            double eps_total);

PowerBreakdown nncc_power_breakdown(const Geometry& geom, const LinearParams& params);
PowerBreakdown nncc_power_breakdown(const Geometry& geom, const PowerCoefficients& coeffs,
                                    double eps_total);

PowerBreakdown conventional_power(const Geometry& geom, const LinearParams& params);
PowerBreakdown conventional_power(const Geometry& geom, double eta_conventional);

/// Rayleigh outage of the U1->U2 exchange at transmit power p_tx, distance r.
double short_range_outage_prob(double p_tx, double r, const LinearParams& params);

/// Rayleigh outage of an uplink at transmit power p_tx and BS distance ri.
double cellular_outage_prob(double p_tx, double ri, const LinearParams& params);

/// Gap-adjusted Shannon rate B log2(1 + snr / gap).
double link_capacity(double snr, double bandwidth, double gap);

double received_snr_short(double p_tx, double r, double fading, const LinearParams& params);
double received_snr_cellular(double p_tx, double ri, double fading, const LinearParams& params);

}  // namespace nncc
