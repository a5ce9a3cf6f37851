#include "nncc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nncc/errors.hpp"
#include "nncc/params.hpp"
#include "nncc/quadrature.hpp"

namespace nncc {

namespace {

void require_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw ValidationError("rho", ValidationError::Kind::NonPositive, "density must be positive");
  }
}

}  // namespace

double nn_distance_pdf(double r, double rho) {
  require_rho(rho);
  if (r < 0.0) throw std::domain_error("nn_distance_pdf: negative distance");
  return 2.0 * kPi * rho * r * std::exp(-kPi * rho * r * r);
}

double nn_distance_cdf(double r, double rho) {
  require_rho(rho);
  if (r <= 0.0) return 0.0;
  return -std::expm1(-kPi * rho * r * r);
}

double partner_distance_to_bs(double r1, double r, double theta) {
  if (!(r1 > 0.0)) throw std::domain_error("partner_distance_to_bs: r1 must be positive");
  if (r < 0.0) throw std::domain_error("partner_distance_to_bs: r must be non-negative");
  const double sq = r * r + r1 * r1 + 2.0 * r1 * r * std::cos(theta);
  if (sq < -1e-12) throw std::domain_error("partner_distance_to_bs: negative squared distance");
  return std::sqrt(std::max(sq, 0.0));
}

Geometry make_geometry(double r1, double r, double theta) {
  return Geometry{r1, r, theta, partner_distance_to_bs(r1, r, theta)};
}

Geometry sample_nn_geometry(RandomStream& stream, double rho, double r1) {
  require_rho(rho);
  if (!(r1 > 0.0)) {
    throw ValidationError("r1", ValidationError::Kind::NonPositive, "U1-BS distance must be positive");
  }
  const double r = std::sqrt(-std::log(stream.uniform_open()) / (kPi * rho));
  double theta = kThetaMin + 2.0 * kPi * stream.uniform();
  if (theta >= kThetaMax) theta = std::nextafter(kThetaMax, 0.0);
  return make_geometry(r1, r, theta);
}

double nn_distance_quantile_tail(double rho, double tail) {
  require_rho(rho);
  return std::sqrt(-std::log(tail) / (kPi * rho));
}

double mean_nn_distance(double rho) {
  require_rho(rho);
  // Tail mass beyond r_max is 1e-30; its contribution to the mean is far
  // below the 1e-12 relative target.
  const double r_max = nn_distance_quantile_tail(rho, 1e-30);
  const auto f = [rho](double r) { return r * nn_distance_pdf(r, rho); };
  return quad::gauss_kronrod(f, 0.0, r_max, {0.0, 1e-13}).value;
}

}  // namespace nncc
