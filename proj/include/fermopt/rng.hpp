#pragma once

#include <cstdint>

namespace fermopt {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stateless counter-based draw: word `counter` of substream `stream` under
/// `seed`. Every (seed, stream, counter) triple maps to an independent-looking
/// 64-bit value, so substreams can be consumed in any order.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Sequential view over one substream.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next() { return counter_hash(seed_, stream_, counter_++); }
  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  /// Standard normal via the inverse CDF, -sqrt(2) * erfc_inv(2u).
  double normal();
  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// +1 or -1 with equal probability.
  int sign() { return (next() >> 63) != 0 ? -1 : 1; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

/// Substream identifier composed from a small tag and an index.
constexpr std::uint64_t substream(std::uint64_t tag, std::uint64_t index) {
  return (tag << 56) ^ index;
}

}  // namespace fermopt
