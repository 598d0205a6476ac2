#pragma once

#include <cstddef>
#include <cstdint>

namespace setrisk {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: the stream is a pure function of (seed, stream id),
/// and every draw is splitmix64 of an incrementing counter. Two generators built
/// from the same key produce the same sequence regardless of what ran before,
/// which is what makes per-trial witnesses replayable.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() noexcept { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n); n must be positive.
  std::size_t index(std::size_t n) noexcept { return static_cast<std::size_t>(next() % n); }

  /// Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) noexcept { return lo + index(hi - lo + 1); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Derive a sub-stream id from a pair of labels (e.g. axiom index, trial index).
inline constexpr std::uint64_t stream_id(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a * 0x100000001b3ULL ^ splitmix64(b));
}

}  // namespace setrisk
