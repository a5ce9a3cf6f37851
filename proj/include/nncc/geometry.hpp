#pragma once

#include "nncc/random.hpp"

namespace nncc {

inline constexpr double kThetaMin = -0.5 * 3.14159265358979323846;
inline constexpr double kThetaMax = 1.5 * 3.14159265358979323846;

/// Placement of the cooperating pair. The BS sits at the origin, U1 at
/// (r1, 0) and U2 at (r1 + r cos(theta), r sin(theta)).
struct Geometry {
  double r1 = 0.0;     // U1-BS distance, m
  double r = 0.0;      // U1-U2 distance, m
  double theta = 0.0;  // bearing of U2 seen from U1, [-pi/2, 3pi/2)
  double r2 = 0.0;     // U2-BS distance, m
};

/// Nearest-neighbour distance density of a PPP with intensity rho.
double nn_distance_pdf(double r, double rho);

/// P(nearest neighbour within r) = 1 - exp(-pi rho r^2).
double nn_distance_cdf(double r, double rho);

/// Law of cosines for the U2-BS distance.
double partner_distance_to_bs(double r1, double r, double theta);

/// Builds a consistent Geometry from (r1, r, theta).
Geometry make_geometry(double r1, double r, double theta);

/// Draws (r, theta) for a fixed r1 from two uniforms of `stream`: r by
/// inverse CDF, theta uniform on [-pi/2, 3pi/2).
Geometry sample_nn_geometry(RandomStream& stream, double rho, double r1);

/// Mean nearest-neighbour distance by quadrature of the density.
double mean_nn_distance(double rho);

/// Radius beyond which the nearest-neighbour tail mass is below `tail`.
double nn_distance_quantile_tail(double rho, double tail);

}  // namespace nncc
