#pragma once

// Counter-based random streams.
//
// Every variate in the library comes from Philox4x32-10 keyed by the 64-bit
// master seed. The 128-bit counter is laid out as
//
//   word 0, 1 : block index within the substream (low, high)
//   word 2    : substream index (one per Monte Carlo trial or slot)
//   word 3    : stream index (one per experiment / check)
//
// so two distinct (master_seed, stream_index, substream) triples never share
// a counter value. Variates are converted with integer arithmetic except the
// Poisson sampler, which uses std::log / std::lgamma for large means.

#include <array>
#include <cstdint>
#include <limits>

namespace cogharvest {

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint64_t kM0 = 0xD2511F53u;
  constexpr std::uint64_t kM1 = 0xCD9E8D57u;
  const std::uint64_t p0 = kM0 * ctr[0];
  const std::uint64_t p1 = kM1 * ctr[2];
  ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
}

}  // namespace detail

/// Philox4x32 with 10 rounds.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    detail::philox_round(ctr, key);
  }
  return ctr;
}

/// Identity of a random stream. Parallel callers use distinct stream indices.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint32_t stream_index = 0;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Sequential engine over one substream of an RngStream. Satisfies
/// UniformRandomBitGenerator.
class StreamEngine {
public:
  using result_type = std::uint64_t;

  StreamEngine(RngStream stream, std::uint32_t substream)
      : key_{static_cast<std::uint32_t>(stream.master_seed),
             static_cast<std::uint32_t>(stream.master_seed >> 32)},
        substream_(substream),
        stream_index_(stream.stream_index) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) refill();
    const auto lo = static_cast<std::uint64_t>(buffer_[2 * lane_]);
    const auto hi = static_cast<std::uint64_t>(buffer_[2 * lane_ + 1]);
    ++lane_;
    return (hi << 32) | lo;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson variate. Multiplication method below mean 10, otherwise
  /// Hormann's transformed rejection (PTRS).
  std::uint64_t poisson(double mean);

private:
  void refill() {
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block_),
                                           static_cast<std::uint32_t>(block_ >> 32), substream_,
                                           stream_index_};
    buffer_ = philox4x32_10(ctr, key_);
    ++block_;
    lane_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t substream_;
  std::uint32_t stream_index_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned lane_ = 2;
};

}  // namespace cogharvest
