#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <limits>

#include <boost/random/exponential_distribution.hpp>

namespace yulesim {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Random stream keyed by (experiment seed, stream index).
///
/// The state of stream (seed, i) is a pure function of the key: SplitMix64
/// applied to a counter that starts at mix(seed) ^ mix'(i), followed by
/// xoshiro256++ updates. Draw j of stream (seed, i) is therefore the same no
/// matter which thread produces it or in which order streams are consumed.
/// Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t counter = splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL) ^
                            splitmix64_mix(~index * 0xD1B54A32D192ED03ULL);
    for (auto& word : state_) {
      counter += 0x9E3779B97F4A7C15ULL;
      word = splitmix64_mix(counter);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  // xoshiro256++ (Blackman & Vigna).
  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard exponential variate (ziggurat).
  double exponential() noexcept { return exp_(*this); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::array<std::uint64_t, 4> state_{};
  boost::random::exponential_distribution<double> exp_{1.0};
};

/// Purposes of streams within one experiment. Folded into the stream index
/// so that, e.g., genealogy and mutation draws of run i never share a stream.
enum class StreamLane : std::uint64_t {
  kPrimary = 0,
  kMarks = 1,
  kTarget = 2,
  kAuxiliary = 3,
};

constexpr std::uint64_t lane_index(StreamLane lane, std::uint64_t replicate) noexcept {
  return (static_cast<std::uint64_t>(lane) << 56) ^ replicate;
}

/// Stream for replicate `replicate` of the experiment seeded with `seed`.
inline Stream make_stream(std::uint64_t seed, std::uint64_t replicate,
                          StreamLane lane = StreamLane::kPrimary) noexcept {
  return Stream(seed, lane_index(lane, replicate));
}

}  // namespace yulesim
