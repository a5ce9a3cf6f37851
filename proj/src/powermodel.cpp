#include "nncc/powermodel.hpp"

#include <cmath>
#include <stdexcept>

namespace nncc {

namespace {

void require_probability(const char* what, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(what) + ": probability must lie in (0, 1)");
  }
}

// Outage-free power scale: the p_tx r^-2 at which the mean received SNR
// equals the gap-adjusted threshold, i.e. outage = 1 - exp(-K r^2 / p_tx).
double short_range_scale(const LinearParams& lp) {
  const auto& b = lp.base;
  return 16.0 * kPi * kPi * lp.delta_s * b.n0 * b.B_s * std::expm1(std::log(2.0) * b.rate / b.B_s) /
         (b.sigma2_short * lp.g_u1 * lp.g_u2 * lp.lambda_s * lp.lambda_s);
}

// Uses G_U2 for both users, matching the single eta shared by both uplinks.
double cellular_scale(const LinearParams& lp) {
  const auto& b = lp.base;
  return 16.0 * kPi * kPi * lp.delta_c * b.n0 * b.B_c * std::expm1(std::log(2.0) * b.rate / b.B_c) /
         (b.sigma2_cell * lp.g_u2 * lp.g_bs * lp.lambda_c * lp.lambda_c);
}

}  // namespace

double per_link_outage_nncc(double p_out) {
  if (p_out == 0.0) return 0.0;
  require_probability("per_link_outage_nncc", p_out);
  // (2 eps - 1) x^2 + 2 (1 - eps) x - p_out = 0. The rationalised root
  // p / (sqrt((1-eps)^2 + p (2 eps - 1)) + (1 - eps)) equals the textbook
  // form and stays regular where 2 eps - 1 vanishes.
  const double one_minus_eps = p_out * (2.0 - p_out);
  const double two_eps_minus_one = 1.0 - 2.0 * one_minus_eps;
  const double disc = one_minus_eps * one_minus_eps + p_out * two_eps_minus_one;
  return p_out / (std::sqrt(disc) + one_minus_eps);
}

double per_link_outage_conventional(double p_out) {
  if (p_out == 0.0) return 0.0;
  require_probability("per_link_outage_conventional", p_out);
  return p_out / (1.0 + std::sqrt(1.0 - p_out));
}

OutageTargets make_outage_targets(double p_out) {
  require_probability("make_outage_targets", p_out);
  OutageTargets t;
  t.p_out = p_out;
  t.eps_short = (1.0 - p_out) * (1.0 - p_out);
  t.eps_total = 1.0 + t.eps_short;
  t.p_out_nc = per_link_outage_nncc(p_out);
  t.p_out_c = per_link_outage_conventional(p_out);
  return t;
}

double short_range_coeff(const LinearParams& params) {
  return short_range_scale(params) / -std::log1p(-params.base.p_out_target);
}

double cellular_coeff(const LinearParams& params, double p_link) {
  require_probability("cellular_coeff", p_link);
  return cellular_scale(params) / -std::log1p(-p_link);
}

PowerCoefficients power_coefficients(const LinearParams& params) {
  return {short_range_coeff(params),
          cellular_coeff(params, per_link_outage_nncc(params.base.p_out_target))};
}

double nncc_total_quadratic(double r, double theta, double r1, const PowerCoefficients& c,
                            double eps_total) {
  const double en = eps_total * c.eta;
  return (2.0 * c.zeta + en) * r * r + 2.0 * en * r1 * std::cos(theta) * r + 2.0 * en * r1 * r1;
}

PowerBreakdown nncc_power_breakdown(const Geometry& g, const PowerCoefficients& c,
                                    double eps_total) {
  PowerBreakdown pb;
  pb.p12 = c.zeta * g.r * g.r;
  pb.p21 = pb.p12;
  pb.p1b = c.eta * g.r1 * g.r1;
  pb.p2b = c.eta * g.r2 * g.r2;
  pb.total_nncc = pb.p12 + pb.p21 + eps_total * (pb.p1b + pb.p2b);

  const double quadratic = nncc_total_quadratic(g.r, g.theta, g.r1, c, eps_total);
  if (std::abs(quadratic - pb.total_nncc) > 1e-9 * std::abs(pb.total_nncc)) {
    throw std::logic_error("nncc_power_breakdown: geometry violates the law of cosines");
  }
  return pb;
}

PowerBreakdown nncc_power_breakdown(const Geometry& geom, const LinearParams& params) {
  return nncc_power_breakdown(geom, power_coefficients(params),
                              1.0 + std::pow(1.0 - params.base.p_out_target, 2));
}

PowerBreakdown conventional_power(const Geometry& g, double eta_conventional) {
  PowerBreakdown pb;
  pb.p1b = eta_conventional * g.r1 * g.r1;
  pb.p2b = eta_conventional * g.r2 * g.r2;
  pb.total_conventional = pb.p1b + pb.p2b;
  return pb;
}

PowerBreakdown conventional_power(const Geometry& geom, const LinearParams& params) {
  return conventional_power(
      geom, cellular_coeff(params, per_link_outage_conventional(params.base.p_out_target)));
}

double short_range_outage_prob(double p_tx, double r, const LinearParams& params) {
  if (!(p_tx > 0.0) || !(r > 0.0)) {
    throw std::domain_error("short_range_outage_prob: p_tx and r must be positive");
  }
  if (std::isinf(p_tx)) return 0.0;
  return -std::expm1(-short_range_scale(params) * r * r / p_tx);
}

double cellular_outage_prob(double p_tx, double ri, const LinearParams& params) {
  if (!(p_tx > 0.0) || !(ri > 0.0)) {
    throw std::domain_error("cellular_outage_prob: p_tx and ri must be positive");
  }
  if (std::isinf(p_tx)) return 0.0;
  return -std::expm1(-cellular_scale(params) * ri * ri / p_tx);
}

double link_capacity(double snr, double bandwidth, double gap) {
  if (!(gap >= 1.0)) throw std::domain_error("link_capacity: gap must be >= 1");
  if (!(bandwidth > 0.0)) throw std::domain_error("link_capacity: bandwidth must be positive");
  if (snr < 0.0) throw std::domain_error("link_capacity: snr must be non-negative");
  return bandwidth * std::log2(1.0 + snr / gap);
}

double received_snr_short(double p_tx, double r, double fading, const LinearParams& params) {
  if (!(r > 0.0)) throw std::domain_error("received_snr_short: r must be positive");
  if (fading == 0.0 || p_tx == 0.0) return 0.0;
  const double path = params.lambda_s / (4.0 * kPi * r);
  return p_tx / (params.base.n0 * params.base.B_s) * path * path * params.g_u1 * params.g_u2 *
         fading;
}

double received_snr_cellular(double p_tx, double ri, double fading, const LinearParams& params) {
  if (!(ri > 0.0)) throw std::domain_error("received_snr_cellular: ri must be positive");
  if (fading == 0.0 || p_tx == 0.0) return 0.0;
  const double path = params.lambda_c / (4.0 * kPi * ri);
  return p_tx / (params.base.n0 * params.base.B_c) * path * path * params.g_u2 * params.g_bs *
         fading;
}

}  // namespace nncc
