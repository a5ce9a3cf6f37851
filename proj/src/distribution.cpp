#include "nncc/distribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "nncc/geometry.hpp"

namespace nncc {

namespace {

constexpr double kHalfPi = 0.5 * kPi;
constexpr double kInv2Pi = 1.0 / (2.0 * kPi);

// Half-width of the Q1 arc around theta = pi on which real roots exist:
// sin(phi) = sqrt(a (p - p_min)) / beta, so that cos(phi)^2 = a (c0 - p) / beta^2.
double q1_arc_half_width(double p, const QuadraticForm& q) {
  const double s = std::sqrt(std::max(q.a * (p - support_infimum(q)), 0.0)) / q.beta;
  return s >= 1.0 ? kHalfPi : std::asin(s);
}

// Q1 integrals are taken over psi = theta - pi in [0, phi] and doubled; cos
// is even about pi. Both roots are (beta cos(psi) -+ delta) / a >= 0 there and
// delta^2 = beta^2 sin(phi - psi) sin(phi + psi), which `xc` keeps accurate
// at the singular end psi -> phi.
struct Q1Point {
  double r_small;
  double r_large;
  double delta;
};

Q1Point q1_point(double p, double psi, double xc, double phi, const QuadraticForm& q) {
  const double gap = xc > 0.0 ? xc : phi - psi;
  const double delta = q.beta * std::sqrt(std::max(std::sin(gap) * std::sin(phi + psi), 0.0));
  const double mid = q.beta * std::cos(psi);
  const double r_large = (mid + delta) / q.a;
  // Product of roots is (c0 - p) / a; recover r_small without cancellation.
  const double r_small = r_large > 0.0 ? std::max(q.c0 - p, 0.0) / (q.a * r_large) : 0.0;
  return {r_small, r_large, delta};
}

double q1_cdf_closed_form(double p, const DistributionContext& ctx) {
  const auto& q = ctx.form;
  if (p <= support_infimum(q)) return 0.0;
  const double phi = q1_arc_half_width(p, q);
  const double rho = ctx.rho;
  const auto f = [&](double psi, double xc) {
    const auto pt = q1_point(p, psi, xc, phi, q);
    return std::exp(-kPi * rho * pt.r_small * pt.r_small) -
           std::exp(-kPi * rho * pt.r_large * pt.r_large);
  };
  return 2.0 * kInv2Pi * quad::tanh_sinh(f, 0.0, phi, ctx.tol).value;
}

double q1_pdf_closed_form(double p, const DistributionContext& ctx) {
  const auto& q = ctx.form;
  if (p <= support_infimum(q)) return 0.0;
  const double phi = q1_arc_half_width(p, q);
  const double rho = ctx.rho;
  const auto f = [&](double psi, double xc) {
    const auto pt = q1_point(p, psi, xc, phi, q);
    if (!(pt.delta > 0.0)) return 0.0;
    return (rho * pt.r_large * std::exp(-kPi * rho * pt.r_large * pt.r_large) +
            rho * pt.r_small * std::exp(-kPi * rho * pt.r_small * pt.r_small)) /
           (2.0 * pt.delta);
  };
  return 2.0 * quad::tanh_sinh(f, 0.0, phi, {0.0, ctx.tol.rel}).value;
}

// Q2 integrands on the full bearing range; the second root is negative.
double q2_cdf_integral(double p, const DistributionContext& ctx) {
  const auto f = [&](double theta) {
    const auto roots = power_roots(p, theta, ctx.form);
    return -std::expm1(-kPi * ctx.rho * roots->r_large * roots->r_large);
  };
  return kInv2Pi * quad::gauss_kronrod(f, kThetaMin, kThetaMax, ctx.tol).value;
}

double q2_pdf_integral(double p, const DistributionContext& ctx) {
  const auto f = [&](double theta) {
    const auto roots = power_roots(p, theta, ctx.form);
    const double r2 = roots->r_large;
    return ctx.rho * r2 * std::exp(-kPi * ctx.rho * r2 * r2) / (2.0 * roots->delta_r);
  };
  return quad::gauss_kronrod(f, kThetaMin, kThetaMax, {0.0, ctx.tol.rel}).value;
}

// Bearings where the admissible r-set changes shape: the half-plane edges
// (theta = +-pi/2, where the linear coefficient changes sign) and the arc
// edges pi -+ phi where the discriminant vanishes.
std::vector<double> reference_breakpoints(double p, const QuadraticForm& q) {
  std::vector<double> pts{kThetaMin, kHalfPi, kThetaMax};
  if (p > support_infimum(q) && p < q.c0) {
    const double phi = q1_arc_half_width(p, q);
    pts.push_back(kPi - phi);
    pts.push_back(kPi + phi);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Integrates f(theta, xc, edge_lo, edge_hi) over each piece between
// breakpoints. Pieces whose midpoint admits no positive root contribute
// nothing; skipping them keeps rounding near a breakpoint from inventing a
// tiny real root pair.
template <class Integrand>
double integrate_pieces(double p, const QuadraticForm& q, const Integrand& f, quad::Tolerance tol) {
  const auto pts = reference_breakpoints(p, q);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i];
    const double hi = pts[i + 1];
    if (!(hi > lo)) continue;
    const auto mid = power_roots(p, 0.5 * (lo + hi), q);
    if (!mid || !(mid->r_large > 0.0)) continue;
    const auto g = [&](double theta, double xc) { return f(theta, xc, lo, hi); };
    total += quad::tanh_sinh(g, lo, hi, tol).value;
  }
  return total;
}

// Roots for a discriminant supplied by the caller.
RootPair roots_with_disc(double p, double theta, double disc, const QuadraticForm& q) {
  const double half_b = q.beta * std::cos(theta);
  const double delta = std::sqrt(std::max(disc, 0.0));
  const double s = half_b >= 0.0 ? -(half_b + delta) : -(half_b - delta);
  double x1 = s / q.a;
  double x2 = s != 0.0 ? (q.c0 - p) / s : x1;
  if (x1 > x2) std::swap(x1, x2);
  return {delta, x1, x2};
}

}  // namespace

double QuadraticForm::b(double theta) const { return 2.0 * beta * std::cos(theta); }

double QuadraticForm::operator()(double r, double theta) const {
  return a * r * r + b(theta) * r + c0;
}

QuadraticForm make_quadratic_form(const PowerCoefficients& coeffs, double eps_total, double r1) {
  const double en = eps_total * coeffs.eta;
  return {2.0 * coeffs.zeta + en, en * r1, 2.0 * en * r1 * r1};
}

std::optional<RootPair> power_roots(double p, double theta, const QuadraticForm& q) {
  const double half_b = q.beta * std::cos(theta);
  const double disc = half_b * half_b - q.a * (q.c0 - p);
  if (disc < 0.0) return std::nullopt;
  // Numerically stable pair: one root from -(half_b + sign * delta) / a, the
  // other from the product (c0 - p) / a.
  return roots_with_disc(p, theta, disc, q);
}

DistributionContext make_distribution_context(const LinearParams& params, double r1) {
  if (!(r1 > 0.0)) {
    throw ValidationError("r1", ValidationError::Kind::NonPositive, "U1-BS distance must be positive");
  }
  const auto targets = make_outage_targets(params.base.p_out_target);
  DistributionContext ctx;
  ctx.form = make_quadratic_form(power_coefficients(params), targets.eps_total, r1);
  ctx.rho = params.base.rho;
  ctx.r1 = r1;
  ctx.rate = params.base.rate;
  ctx.eta_conventional = cellular_coeff(params, targets.p_out_c);
  return ctx;
}

double support_infimum(const QuadraticForm& q) { return q.c0 - q.beta * q.beta / q.a; }

double q1_lower_boundary(double theta, const QuadraticForm& q) {
  const double bc = q.beta * std::cos(theta);
  return q.c0 - bc * bc / q.a;
}

double cdf_closed_form(double p, const DistributionContext& ctx) {
  if (p <= ctx.form.c0) return q1_cdf_closed_form(p, ctx);
  return q2_cdf_integral(p, ctx) + q1_cdf_closed_form(ctx.form.c0, ctx);
}

double pdf_closed_form(double p, const DistributionContext& ctx) {
  if (p <= ctx.form.c0) return q1_pdf_closed_form(p, ctx);
  return q2_pdf_integral(p, ctx);
}

double cdf_reference(double p, const DistributionContext& ctx) {
  if (p < 0.0) throw std::domain_error("cdf_reference: negative power");
  const auto& q = ctx.form;
  if (p <= support_infimum(q)) return 0.0;
  const auto f = [&](double theta, double, double, double) {
    const auto roots = power_roots(p, theta, q);
    if (!roots) return 0.0;
    return nn_distance_cdf(std::max(roots->r_large, 0.0), ctx.rho) -
           nn_distance_cdf(std::max(roots->r_small, 0.0), ctx.rho);
  };
  const double value = kInv2Pi * integrate_pieces(p, q, f, ctx.tol);
  return std::clamp(value, 0.0, 1.0);
}

double pdf_reference(double p, const DistributionContext& ctx) {
  const auto& q = ctx.form;
  if (p <= support_infimum(q)) return 0.0;
  const double rho = ctx.rho;
  const bool has_arc = p < q.c0;
  const auto f = [&](double theta, double xc, double lo, double hi) {
    // Next to an arc edge e the discriminant is beta^2 (cos^2 - cos^2 e) =
    // beta^2 sin(e - theta) sin(e + theta); xc carries e - theta exactly.
    const double edge = xc < 0.0 ? lo : hi;
    const bool arc_edge = has_arc && std::abs(std::abs(edge - kPi) - kHalfPi) > 1e-12;
    double disc;
    if (arc_edge) {
      disc = q.beta * q.beta * std::sin(xc) * std::sin(edge + theta);
    } else {
      const double half_b = q.beta * std::cos(theta);
      disc = half_b * half_b - q.a * (q.c0 - p);
    }
    if (!(disc > 0.0)) return 0.0;
    const auto roots = roots_with_disc(p, theta, disc, q);
    double sum = 0.0;
    for (double r : {roots.r_small, roots.r_large}) {
      if (r > 0.0) sum += rho * r * std::exp(-kPi * rho * r * r);
    }
    return sum / (2.0 * roots.delta_r);
  };
  return integrate_pieces(p, q, f, {0.0, ctx.tol.rel});
}

double expected_power(const DistributionContext& ctx) {
  const auto& q = ctx.form;
  const double rho = ctx.rho;
  const double r_max = nn_distance_quantile_tail(rho, 1e-16);
  const auto inner = [&](double theta) {
    const auto g = [&](double r) { return q(r, theta) * rho * r * std::exp(-kPi * rho * r * r); };
    return quad::gauss_kronrod(g, 0.0, r_max, {0.0, 1e-13}).value;
  };
  return quad::gauss_kronrod(inner, kThetaMin, kThetaMax, {0.0, 1e-13}).value;
}

double expected_power_moments(const DistributionContext& ctx) {
  return ctx.form.a / (kPi * ctx.rho) + ctx.form.c0;
}

double expected_power_conventional(const DistributionContext& ctx) {
  return ctx.eta_conventional * (2.0 * ctx.r1 * ctx.r1 + 1.0 / (kPi * ctx.rho));
}

double energy_efficiency(const DistributionContext& ctx) {
  return 2.0 * ctx.rate / expected_power_moments(ctx);
}

double energy_efficiency_conventional(const DistributionContext& ctx) {
  return 2.0 * ctx.rate / expected_power_conventional(ctx);
}

double upper_support_point(const DistributionContext& ctx, double tail_mass) {
  double lo = support_infimum(ctx.form);
  double hi = std::max(ctx.form.c0, expected_power_moments(ctx));
  while (cdf_reference(hi, ctx) < 1.0 - tail_mass) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 60 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf_reference(mid, ctx) < 1.0 - tail_mass ? lo : hi) = mid;
  }
  return hi;
}

DistributionResult evaluate_distribution(const DistributionContext& ctx, std::size_t points) {
  if (points < 2) throw std::invalid_argument("evaluate_distribution: need at least 2 points");
  DistributionResult out;
  const double lo = support_infimum(ctx.form);
  const double hi = upper_support_point(ctx);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  out.p_grid.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    out.p_grid.push_back(i + 1 == points ? hi : lo * std::exp(step * static_cast<double>(i)));
  }
  for (double p : out.p_grid) {
    out.cdf_closed_form.push_back(cdf_closed_form(p, ctx));
    out.pdf_closed_form.push_back(pdf_closed_form(p, ctx));
    out.cdf_reference.push_back(cdf_reference(p, ctx));
  }
  out.expected_power = expected_power(ctx);
  out.energy_efficiency = 2.0 * ctx.rate / out.expected_power;
  return out;
}

ClosedFormDiscrepancy compare_with_reference(const DistributionResult& res,
                                          const DistributionContext& ctx) {
  ClosedFormDiscrepancy d;
  const auto& q = ctx.form;
  const double c0 = q.c0;
  const double lo = support_infimum(q);
  const double hi = res.p_grid.back();

  for (std::size_t i = 0; i < res.p_grid.size(); ++i) {
    const double gap = std::abs(res.cdf_closed_form[i] - res.cdf_reference[i]);
    if (gap > d.max_cdf_gap) {
      d.max_cdf_gap = gap;
      d.max_cdf_gap_at = res.p_grid[i];
    }
    d.pdf_peak = std::max(d.pdf_peak, res.pdf_closed_form[i]);
  }
  d.cdf_closed_form_limit = res.cdf_closed_form.back();

  // The log grid barely enters [lo, c0]; probe it on its own.
  constexpr int kQ1Points = 64;
  for (int i = 1; i <= kQ1Points; ++i) {
    const double p = lo + (c0 - lo) * i / kQ1Points;
    d.q1_max_cdf_gap =
        std::max(d.q1_max_cdf_gap, std::abs(cdf_closed_form(p, ctx) - cdf_reference(p, ctx)));
  }

  const auto pdf = [&](double p) { return pdf_closed_form(p, ctx); };
  const quad::Tolerance mass_tol{1e-8, 1e-9};
  const double far = std::max(hi, upper_support_point(ctx, 1e-14));
  const double mass = quad::gauss_kronrod(pdf, lo, c0, mass_tol, 12).value +
                      quad::gauss_kronrod(pdf, c0, far, mass_tol, 12).value;
  d.pdf_mass_minus_one = mass - 1.0;

  d.reference_mass_at_junction = cdf_reference(c0, ctx);
  const double nudge = 1e-9 * c0;
  d.cdf_closed_form_jump = cdf_closed_form(c0 + nudge, ctx) - cdf_closed_form(c0, ctx);
  d.pdf_closed_form_jump = pdf_closed_form(c0 + nudge, ctx) - pdf_closed_form(c0 - nudge, ctx);

  // Central differences at interior grid points, keeping the stencil clear of
  // the support edge and of the Q1/Q2 junction.
  for (std::size_t i = 1; i + 1 < res.p_grid.size(); ++i) {
    const double p = res.p_grid[i];
    const double spacing = std::min(p - res.p_grid[i - 1], res.p_grid[i + 1] - p);
    const double h = 1e-2 * std::min({spacing, p - lo, std::abs(p - c0)});
    if (!(h > 1e-7 * p)) continue;
    const double fd_closed = (cdf_closed_form(p + h, ctx) - cdf_closed_form(p - h, ctx)) / (2.0 * h);
    const double fd_ref = (cdf_reference(p + h, ctx) - cdf_reference(p - h, ctx)) / (2.0 * h);
    d.max_fd_gap_closed_form = std::max(d.max_fd_gap_closed_form, std::abs(fd_closed - res.pdf_closed_form[i]));
    d.max_fd_gap_reference =
        std::max(d.max_fd_gap_reference, std::abs(fd_ref - pdf_reference(p, ctx)));
    ++d.fd_points;
  }
  return d;
}

}  // namespace nncc
