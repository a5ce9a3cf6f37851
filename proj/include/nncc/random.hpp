#pragma once

#include <array>
#include <cstdint>

namespace nncc {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The pair (seed, stream_id) fully determines
/// the sequence; the seed is the Philox key and stream_id occupies the upper
/// half of the counter, so distinct ids never share a block.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Exponential with the given mean (Rayleigh power gain).
  double exponential(double mean);

  /// Child stream for trial `index`. Children of distinct parents or
  /// distinct indices are keyed independently.
  RandomStream substream(std::uint64_t index) const;

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace nncc
