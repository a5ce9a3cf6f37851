#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nncc/geometry.hpp"
#include "nncc/params.hpp"
#include "nncc/powermodel.hpp"
#include "nncc/random.hpp"

namespace nncc {

inline constexpr std::uint64_t kMinTrials = 10'000;

/// Fading power gains for one cooperation round. Slot 2 carries each user's
/// own message; slot 3 carries the relayed copy (U1 sends D2, U2 sends D1).
/// Every slot refades independently.
struct ChannelDraws {
  double h12 = 0.0;
  double h21 = 0.0;
  std::array<double, 2> slot2{};  // {U1->BS, U2->BS}
  std::array<double, 2> slot3{};  // {U1->BS, U2->BS}
};

ChannelDraws draw_channels(RandomStream& stream, const LinearParams& params);

struct TrialOutcome {
  int delta = 1;  // 0 when both short-range decodes succeed
  bool d1_delivered = false;
  bool d2_delivered = false;
  // delta = 0: both copies of D1 lost; delta = 1: at least one uplink lost.
  bool pair_outage_composite = false;
  bool u1_uplink_outage = false;  // U1's slot-2 uplink alone
  double energy = 0.0;            // J, unit-length slots
};

/// Deterministic protocol step for given channel draws.
TrialOutcome evaluate_protocol_trial(const ChannelDraws& draws, const Geometry& geom,
                                     const PowerBreakdown& powers, const LinearParams& params);

TrialOutcome simulate_protocol_trial(RandomStream& stream, const Geometry& geom,
                                     const PowerBreakdown& powers, const LinearParams& params);

struct RateEstimate {
  std::uint64_t events = 0;
  std::uint64_t trials = 0;

  double value() const;
  /// Binomial standard error of the estimate.
  double std_error() const;
  /// |value - target| <= k sqrt(target (1 - target) / trials).
  bool within_sigma(double target, double k = 3.0) const;
};

struct McReport {
  std::uint64_t n_trials = 0;
  RateEstimate delta0;
  RateEstimate d1_outage;
  RateEstimate d2_outage;
  RateEstimate pair_outage;       // either message lost
  RateEstimate composite_outage;  // accounting used to derive the per-link target
  RateEstimate uplink_outage;     // single cooperative uplink at eta r1^2
  RateEstimate conventional_outage;
  double mean_energy = 0.0;
  double energy_stderr = 0.0;
  std::vector<double> sorted_samples;
  double sample_min = 0.0;
  double sample_max = 0.0;
  double elapsed_seconds = 0.0;
};

/// Fixed-geometry protocol simulation; trial i draws from stream.substream(i).
McReport estimate_outage(std::uint64_t n, const Geometry& geom, const LinearParams& params,
                         const RandomStream& stream, unsigned workers = 0);

/// As above with explicit cooperative and non-cooperative power allocations.
McReport estimate_outage(std::uint64_t n, const Geometry& geom, const PowerBreakdown& nncc,
                         const PowerBreakdown& conventional, const LinearParams& params,
                         const RandomStream& stream, unsigned workers = 0);

/// PPP draws of the cooperative total power for fixed r1.
McReport sample_power_distribution(std::uint64_t n, double rho, double r1,
                                   const LinearParams& params, const RandomStream& stream,
                                   unsigned workers = 0);

/// Mean protocol energy per round. With fixed_r the partner sits at distance
/// fixed_r with a uniform bearing; otherwise it is the PPP nearest neighbour.
McReport estimate_energy(std::uint64_t n, double r1, std::optional<double> fixed_r,
                         const LinearParams& params, const RandomStream& stream,
                         unsigned workers = 0);

/// Kolmogorov-Smirnov statistic of ascending samples against a model CDF.
double ks_distance(std::span<const double> sorted_samples,
                   const std::function<double(double)>& cdf);

/// Same statistic with the model CDF already evaluated at each sample.
double ks_distance_values(std::span<const double> sorted_samples,
                          std::span<const double> cdf_values);

/// Evaluates f at every x on `workers` threads; the output order matches xs.
std::vector<double> parallel_map(std::span<const double> xs,
                                 const std::function<double(double)>& f, unsigned workers = 0);

unsigned resolve_workers(unsigned requested);

}  // namespace nncc
