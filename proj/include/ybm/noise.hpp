#pragma once

#include <cstdint>

#include "ybm/discretize.hpp"

namespace ybm {

// A frozen two-sided noise realization, addressable by step index.
// increment(k, dt) is a pure function of (seed, k, dt), so ensemble
// members started anywhere read identical increments and runs replay
// bit-for-bit. Construction: a splitmix-style avalanche of (seed, k)
// feeds a Box-Muller transform.
class NoisePath : public IncrementSource {
 public:
  explicit NoisePath(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Standard normal sample attached to step k.
  double standardNormal(std::int64_t k) const;

  // N(0, dt) increment for the cell ending step k; dt must be > 0.
  double increment(std::int64_t k, double dt) const override;

 private:
  std::uint64_t seed_;
};

} // namespace ybm
