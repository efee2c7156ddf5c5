#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ybm/discretize.hpp"
#include "ybm/histogram.hpp"
#include "ybm/noise.hpp"

// Random-attractor snapshots: a frozen noise realization shared by an
// ensemble of random initial states, observed at a fixed late time.

namespace ybm {

struct EnsembleSpec {
  std::uint64_t omegaSeed = 1;      // the frozen noise realization
  std::uint64_t icSeedBase = 1000;  // member i draws from icSeedBase + i
  int nInit = 20000;
  std::int64_t tFinal = 10000;      // years
  std::vector<double> snapshotOffsets{0.0}; // year fractions; offset*q integral
  double initialPrice = 1.0;
};

struct AttractorSnapshot {
  double offset = 0;
  // (Nr(t), Nr(t+1)) at t = tFinal + offset, ordered by member index.
  std::vector<std::array<double, 2>> points;
};

struct PullbackResult {
  std::vector<AttractorSnapshot> snapshots;
  int requested = 0;
  int dropped = 0;   // members that diverged
  bool flagged = false; // dropped > 1% of requested
};

PullbackResult pullbackEnsemble(const EnsembleSpec& spec, const StepGrid& g,
                                const ModelParams& p);

// Empirical 2D density of one snapshot (the projected random measure).
Histogram snapshotHistogram(const AttractorSnapshot& snap, int ng,
                            std::array<double, 2> lo, std::array<double, 2> hi);

// Shared axis bounds [0, 1.05 * max coordinate] over a set of snapshots.
std::array<double, 2> snapshotBounds(const std::vector<AttractorSnapshot>& snaps);

// Empirical frequency of P(horizon) > level over nPaths paths, each with
// its own noise seed (seedBase + i) and initial-condition seed.
double priceTailCheck(const ModelParams& p, const StepGrid& g, std::int64_t horizonYears,
                      double level, int nPaths, std::uint64_t seedBase = 1);

} // namespace ybm
