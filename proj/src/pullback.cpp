#include "ybm/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ybm {

namespace {

// Step index of the sample at tFinal + offset years after init.
std::int64_t sampleIndex(std::int64_t k0, std::int64_t tFinal, double offset,
                         const StepGrid& g) {
  const double stepsIn = offset * g.q;
  const auto rounded = static_cast<std::int64_t>(std::llround(stepsIn));
  if (std::abs(stepsIn - static_cast<double>(rounded)) > 1e-9)
    throw std::domain_error("pullback: snapshot offset not representable on the grid");
  if (rounded < 0 || rounded >= g.cellsPerYear)
    throw std::domain_error("pullback: snapshot offset must lie in [0, 1)");
  return k0 + tFinal * g.cellsPerYear + rounded;
}

} // namespace

PullbackResult pullbackEnsemble(const EnsembleSpec& spec, const StepGrid& g,
                                const ModelParams& p) {
  if (spec.nInit < 1) throw std::domain_error("pullback: nInit must be >= 1");
  if (spec.tFinal < 1) throw std::domain_error("pullback: tFinal must be >= 1");

  const NoisePath omega(spec.omegaSeed);
  PullbackResult res;
  res.requested = spec.nInit;
  res.snapshots.resize(spec.snapshotOffsets.size());

  // Collect the step indices to observe; Nr(t) pairs with Nr(t+1) one
  // year (cellsPerYear cells) later.
  const RingState probe = RingState::initial(0, g, p, spec.initialPrice);
  const std::int64_t k0 = probe.stepIndex();
  std::vector<std::int64_t> firstIdx;
  std::int64_t kMax = 0;
  for (std::size_t s = 0; s < spec.snapshotOffsets.size(); ++s) {
    res.snapshots[s].offset = spec.snapshotOffsets[s];
    const std::int64_t k = sampleIndex(k0, spec.tFinal, spec.snapshotOffsets[s], g);
    firstIdx.push_back(k);
    kMax = std::max(kMax, k + g.cellsPerYear);
  }

  std::vector<double> nrAt(2 * firstIdx.size());
  for (int member = 0; member < spec.nInit; ++member) {
    RingState st = RingState::initial(spec.icSeedBase + static_cast<std::uint64_t>(member),
                                      g, p, spec.initialPrice);
    bool ok = true;
    try {
      for (std::int64_t k = k0 + 1; k <= kMax; ++k) {
        std::optional<double> dW;
        if (p.sigma > 0) dW = omega.increment(k, cellWidth(k, g));
        const StepOutput z = step(st, g, p, dW);
        for (std::size_t s = 0; s < firstIdx.size(); ++s) {
          if (k == firstIdx[s]) nrAt[2 * s] = z.Nr;
          if (k == firstIdx[s] + g.cellsPerYear) nrAt[2 * s + 1] = z.Nr;
        }
      }
    } catch (const DivergenceError&) {
      ok = false;
    }
    if (!ok) {
      ++res.dropped;
      continue;
    }
    for (std::size_t s = 0; s < firstIdx.size(); ++s)
      res.snapshots[s].points.push_back({nrAt[2 * s], nrAt[2 * s + 1]});
  }
  res.flagged = res.dropped * 100 > res.requested;
  return res;
}

Histogram snapshotHistogram(const AttractorSnapshot& snap, int ng,
                            std::array<double, 2> lo, std::array<double, 2> hi) {
  return buildHistogram2D(snap.points, ng, lo, hi);
}

std::array<double, 2> snapshotBounds(const std::vector<AttractorSnapshot>& snaps) {
  double mx = 0;
  for (const auto& s : snaps)
    for (const auto& pt : s.points) mx = std::max({mx, pt[0], pt[1]});
  if (!(mx > 0)) mx = 1.0;
  return {0.0, 1.05 * mx};
}

double priceTailCheck(const ModelParams& p, const StepGrid& g, std::int64_t horizonYears,
                      double level, int nPaths, std::uint64_t seedBase) {
  if (nPaths < 1) throw std::domain_error("priceTailCheck: nPaths must be >= 1");
  if (horizonYears < 1) throw std::domain_error("priceTailCheck: horizon must be >= 1 year");
  int exceed = 0;
  for (int i = 0; i < nPaths; ++i) {
    const NoisePath noise(seedBase + static_cast<std::uint64_t>(i));
    const SimWindow w{horizonYears, static_cast<double>(horizonYears) - 1.0,
                      static_cast<double>(horizonYears)};
    const Trajectory tr =
        simulate(seedBase + 0x9E37u + static_cast<std::uint64_t>(i), g, p, w, &noise);
    if (!tr.steps.empty() && tr.steps.back().P > level) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(nPaths);
}

} // namespace ybm
