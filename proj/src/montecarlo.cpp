#include "nncc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace nncc {

namespace {

// Trials are grouped into fixed-size blocks so that floating-point sums are
// formed in the same order whatever the worker count.
constexpr std::uint64_t kBlockSize = 8192;

template <class Body>
void for_each_block(std::uint64_t n_blocks, unsigned workers, const Body& body) {
  workers = std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(n_blocks, 1));
  std::atomic<std::uint64_t> next{0};
  const auto run = [&] {
    for (std::uint64_t b = next++; b < n_blocks; b = next++) body(b);
  };
  if (workers <= 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

struct Counts {
  std::uint64_t delta0 = 0, d1 = 0, d2 = 0, pair = 0, composite = 0, uplink = 0, conventional = 0;
  double energy = 0.0;
  double energy_sq = 0.0;
};

void require_trials(std::uint64_t n) {
  if (n < kMinTrials) {
    throw std::invalid_argument("Monte Carlo budget of " + std::to_string(n) +
                                " trials is below the minimum of " + std::to_string(kMinTrials));
  }
}

void finish_energy(McReport& rep, double sum, double sum_sq) {
  const auto n = static_cast<double>(rep.n_trials);
  rep.mean_energy = sum / n;
  const double var = std::max(sum_sq / n - rep.mean_energy * rep.mean_energy, 0.0) * n / (n - 1.0);
  rep.energy_stderr = std::sqrt(var / n);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

ChannelDraws draw_channels(RandomStream& stream, const LinearParams& params) {
  const double ms = params.base.sigma2_short;
  const double mc = params.base.sigma2_cell;
  ChannelDraws d;
  d.h12 = stream.exponential(ms);
  d.h21 = stream.exponential(ms);
  d.slot2 = {stream.exponential(mc), stream.exponential(mc)};
  d.slot3 = {stream.exponential(mc), stream.exponential(mc)};
  return d;
}

TrialOutcome evaluate_protocol_trial(const ChannelDraws& draws, const Geometry& g,
                                     const PowerBreakdown& pw, const LinearParams& params) {
  const auto& b = params.base;
  const auto short_ok = [&](double p_tx, double h) {
    if (g.r <= 0.0) return true;  // co-located users exchange without loss
    return link_capacity(received_snr_short(p_tx, g.r, h, params), b.B_s, params.delta_s) >= b.rate;
  };
  const auto uplink_ok = [&](double p_tx, double ri, double h) {
    return link_capacity(received_snr_cellular(p_tx, ri, h, params), b.B_c, params.delta_c) >= b.rate;
  };

  TrialOutcome out;
  const bool exchange = short_ok(pw.p12, draws.h12) && short_ok(pw.p21, draws.h21);
  out.delta = exchange ? 0 : 1;

  const bool u1_slot2 = uplink_ok(pw.p1b, g.r1, draws.slot2[0]);
  const bool u2_slot2 = uplink_ok(pw.p2b, g.r2, draws.slot2[1]);
  out.u1_uplink_outage = !u1_slot2;

  if (out.delta == 0) {
    const bool u1_slot3 = uplink_ok(pw.p1b, g.r1, draws.slot3[0]);  // carries D2
    const bool u2_slot3 = uplink_ok(pw.p2b, g.r2, draws.slot3[1]);  // carries D1
    out.d1_delivered = u1_slot2 || u2_slot3;
    out.d2_delivered = u2_slot2 || u1_slot3;
    out.pair_outage_composite = !out.d1_delivered;
    out.energy = pw.p12 + pw.p21 + 2.0 * (pw.p1b + pw.p2b);
  } else {
    out.d1_delivered = u1_slot2;
    out.d2_delivered = u2_slot2;
    out.pair_outage_composite = !(u1_slot2 && u2_slot2);
    out.energy = pw.p12 + pw.p21 + (pw.p1b + pw.p2b);
  }
  return out;
}

TrialOutcome simulate_protocol_trial(RandomStream& stream, const Geometry& geom,
                                     const PowerBreakdown& powers, const LinearParams& params) {
  return evaluate_protocol_trial(draw_channels(stream, params), geom, powers, params);
}

double RateEstimate::value() const {
  return trials ? static_cast<double>(events) / static_cast<double>(trials) : 0.0;
}

double RateEstimate::std_error() const {
  if (!trials) return 0.0;
  const double p = value();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

bool RateEstimate::within_sigma(double target, double k) const {
  const double sigma = std::sqrt(target * (1.0 - target) / static_cast<double>(trials));
  return std::abs(value() - target) <= k * sigma;
}

McReport estimate_outage(std::uint64_t n, const Geometry& geom, const LinearParams& params,
                         const RandomStream& stream, unsigned workers) {
  return estimate_outage(n, geom, nncc_power_breakdown(geom, params),
                         conventional_power(geom, params), params, stream, workers);
}

McReport estimate_outage(std::uint64_t n, const Geometry& geom, const PowerBreakdown& nncc,
                         const PowerBreakdown& conv, const LinearParams& params,
                         const RandomStream& stream, unsigned workers) {
  require_trials(n);
  const auto t0 = std::chrono::steady_clock::now();
  const auto& b = params.base;

  const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Counts> blocks(n_blocks);
  for_each_block(n_blocks, workers, [&](std::uint64_t blk) {
    Counts c;
    const std::uint64_t end = std::min(n, (blk + 1) * kBlockSize);
    for (std::uint64_t i = blk * kBlockSize; i < end; ++i) {
      auto rs = stream.substream(i);
      const auto t = simulate_protocol_trial(rs, geom, nncc, params);
      c.delta0 += t.delta == 0;
      c.d1 += !t.d1_delivered;
      c.d2 += !t.d2_delivered;
      c.pair += !(t.d1_delivered && t.d2_delivered);
      c.composite += t.pair_outage_composite;
      c.uplink += t.u1_uplink_outage;
      c.energy += t.energy;
      c.energy_sq += t.energy * t.energy;

      // Non-cooperative reference: two independent uplinks at their own per-link target.
      const double h1 = rs.exponential(b.sigma2_cell);
      const double h2 = rs.exponential(b.sigma2_cell);
      const auto ok = [&](double p_tx, double ri, double h) {
        return link_capacity(received_snr_cellular(p_tx, ri, h, params), b.B_c, params.delta_c) >=
               b.rate;
      };
      c.conventional += !(ok(conv.p1b, geom.r1, h1) && ok(conv.p2b, geom.r2, h2));
    }
    blocks[blk] = c;
  });

  McReport rep;
  rep.n_trials = n;
  Counts total;
  for (const auto& c : blocks) {
    total.delta0 += c.delta0;
    total.d1 += c.d1;
    total.d2 += c.d2;
    total.pair += c.pair;
    total.composite += c.composite;
    total.uplink += c.uplink;
    total.conventional += c.conventional;
    total.energy += c.energy;
    total.energy_sq += c.energy_sq;
  }
  rep.delta0 = {total.delta0, n};
  rep.d1_outage = {total.d1, n};
  rep.d2_outage = {total.d2, n};
  rep.pair_outage = {total.pair, n};
  rep.composite_outage = {total.composite, n};
  rep.uplink_outage = {total.uplink, n};
  rep.conventional_outage = {total.conventional, n};
  finish_energy(rep, total.energy, total.energy_sq);
  rep.elapsed_seconds = elapsed_since(t0);
  return rep;
}

McReport sample_power_distribution(std::uint64_t n, double rho, double r1,
                                   const LinearParams& params, const RandomStream& stream,
                                   unsigned workers) {
  require_trials(n);
  const auto t0 = std::chrono::steady_clock::now();
  const auto coeffs = power_coefficients(params);
  const double eps_total = make_outage_targets(params.base.p_out_target).eps_total;

  McReport rep;
  rep.n_trials = n;
  rep.sorted_samples.resize(n);
  const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::array<double, 2>> sums(n_blocks);
  for_each_block(n_blocks, workers, [&](std::uint64_t blk) {
    double s = 0.0, s2 = 0.0;
    const std::uint64_t end = std::min(n, (blk + 1) * kBlockSize);
    for (std::uint64_t i = blk * kBlockSize; i < end; ++i) {
      auto rs = stream.substream(i);
      const auto g = sample_nn_geometry(rs, rho, r1);
      const double p = nncc_power_breakdown(g, coeffs, eps_total).total_nncc;
      rep.sorted_samples[i] = p;
      s += p;
      s2 += p * p;
    }
    sums[blk] = {s, s2};
  });
  double s = 0.0, s2 = 0.0;
  for (const auto& v : sums) {
    s += v[0];
    s2 += v[1];
  }
  finish_energy(rep, s, s2);
  std::sort(rep.sorted_samples.begin(), rep.sorted_samples.end());
  rep.sample_min = rep.sorted_samples.front();
  rep.sample_max = rep.sorted_samples.back();
  rep.elapsed_seconds = elapsed_since(t0);
  return rep;
}

McReport estimate_energy(std::uint64_t n, double r1, std::optional<double> fixed_r,
                         const LinearParams& params, const RandomStream& stream,
                         unsigned workers) {
  require_trials(n);
  const auto t0 = std::chrono::steady_clock::now();
  const auto coeffs = power_coefficients(params);
  const double eps_total = make_outage_targets(params.base.p_out_target).eps_total;

  const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::array<double, 2>> sums(n_blocks);
  for_each_block(n_blocks, workers, [&](std::uint64_t blk) {
    double s = 0.0, s2 = 0.0;
    const std::uint64_t end = std::min(n, (blk + 1) * kBlockSize);
    for (std::uint64_t i = blk * kBlockSize; i < end; ++i) {
      auto rs = stream.substream(i);
      Geometry g;
      if (fixed_r) {
        double theta = kThetaMin + 2.0 * kPi * rs.uniform();
        if (theta >= kThetaMax) theta = std::nextafter(kThetaMax, 0.0);
        g = make_geometry(r1, *fixed_r, theta);
      } else {
        g = sample_nn_geometry(rs, params.base.rho, r1);
      }
      const auto pw = nncc_power_breakdown(g, coeffs, eps_total);
      const double e = simulate_protocol_trial(rs, g, pw, params).energy;
      s += e;
      s2 += e * e;
    }
    sums[blk] = {s, s2};
  });
  McReport rep;
  rep.n_trials = n;
  double s = 0.0, s2 = 0.0;
  for (const auto& v : sums) {
    s += v[0];
    s2 += v[1];
  }
  finish_energy(rep, s, s2);
  rep.elapsed_seconds = elapsed_since(t0);
  return rep;
}

double ks_distance_values(std::span<const double> x, std::span<const double> cdf) {
  if (x.empty()) throw std::invalid_argument("ks_distance: empty sample");
  if (x.size() != cdf.size()) throw std::invalid_argument("ks_distance: size mismatch");
  if (!std::is_sorted(x.begin(), x.end())) {
    throw std::invalid_argument("ks_distance: samples must be sorted ascending");
  }
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - cdf[i];
    const double below = cdf[i] - static_cast<double>(i) / n;
    d = std::max({d, std::abs(above), std::abs(below)});
  }
  return d;
}

double ks_distance(std::span<const double> x, const std::function<double(double)>& cdf) {
  if (!std::is_sorted(x.begin(), x.end())) {
    throw std::invalid_argument("ks_distance: samples must be sorted ascending");
  }
  std::vector<double> values(x.size());
  std::transform(x.begin(), x.end(), values.begin(), cdf);
  return ks_distance_values(x, values);
}

std::vector<double> parallel_map(std::span<const double> xs,
                                 const std::function<double(double)>& f, unsigned workers) {
  std::vector<double> out(xs.size());
  constexpr std::uint64_t chunk = 1024;
  const std::uint64_t n_blocks = (xs.size() + chunk - 1) / chunk;
  for_each_block(n_blocks, workers, [&](std::uint64_t blk) {
    const std::uint64_t end = std::min<std::uint64_t>(xs.size(), (blk + 1) * chunk);
    for (std::uint64_t i = blk * chunk; i < end; ++i) out[i] = f(xs[i]);
  });
  return out;
}

}  // namespace nncc
