#include "ybm/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ybm {

namespace {

std::uint64_t avalanche(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t word(std::uint64_t seed, std::int64_t k, std::uint64_t stream) {
  std::uint64_t h = avalanche(seed ^ 0x6A09E667F3BCC909ULL);
  h = avalanche(h ^ (static_cast<std::uint64_t>(k) * 0xD1B54A32D192ED03ULL));
  return avalanche(h ^ (stream * 0x9E3779B97F4A7C15ULL));
}

} // namespace

double NoisePath::standardNormal(std::int64_t k) const {
  // u1 in (0,1], u2 in [0,1): 53-bit mantissas from independent words.
  const double u1 =
      (static_cast<double>(word(seed_, k, 1) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(word(seed_, k, 2) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double NoisePath::increment(std::int64_t k, double dt) const {
  if (!(dt > 0)) throw std::domain_error("NoisePath::increment: dt must be > 0");
  return std::sqrt(dt) * standardNormal(k);
}

} // namespace ybm
