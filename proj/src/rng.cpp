#include "fermopt/rng.hpp"

#include <cmath>

#include <boost/math/special_functions/erf.hpp>

namespace fermopt {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t key = mix64(seed ^ mix64(stream ^ 0x632be59bd9b4e019ULL));
  return mix64(key ^ mix64(counter + 0xd1b54a32d192ed03ULL));
}

double CounterRng::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * uniform());
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x < limit) return x % bound;
  }
}

}  // namespace fermopt
