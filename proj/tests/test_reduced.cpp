#include <doctest.h>

#include <cmath>
#include <random>

#include "ybm/discretize.hpp"

using namespace ybm;

TEST_SUITE_BEGIN("reduced");

namespace {

// Rebuild the full ring state encoded by a reduced 5-vector anchored at a
// season-active step: the two youngest active newborn counts and three
// prices determine everything the q=2 dynamics reads.
RingState stateFromReduced(const std::array<double, 5>& s, const StepGrid& g,
                           const ModelParams& p) {
  const auto [nrKm2, nrK, pKm2, pKm1, pK] = s;
  (void)pKm1;
  const double brK = fertility(nrK, p) * breederFraction(pK, p);
  const double bbK = fertility(nrK, p) * (2.0 - breederFraction(pK, p));
  const double brKm2 = fertility(nrKm2, p) * breederFraction(pKm2, p);
  const double bbKm2 = fertility(nrKm2, p) * (2.0 - breederFraction(pKm2, p));
  // oldest..newest = (k-2, k-1, k)
  return RingState::fromHistory({brKm2, 0.0, brK}, {bbKm2, 0.0, bbK}, pK, g);
}

} // namespace

TEST_CASE("reduced map premise validation") {
  const ModelParams h1 = preset("H1");
  const StepGrid g3 = buildGrid(3.0, h1);
  CHECK_THROWS_AS(reducedQ2Step({1, 1, 1, 1, 1}, g3, h1), std::domain_error);
  ModelParams wide = h1;
  wide.rho = 0.3; // season spills past the first half-year
  CHECK_THROWS_AS(reducedQ2Step({1, 1, 1, 1, 1}, buildGrid(2.0, wide), wide),
                  std::domain_error);
}

TEST_CASE("reduced map reproduces the full q=2 dynamics") {
  const ModelParams h1 = preset("H1");
  const StepGrid g = buildGrid(2.0, h1);
  std::mt19937_64 seedGen(4242);
  for (int trial = 0; trial < 10; ++trial) {
    const std::uint64_t seed = seedGen();
    RingState st = RingState::initial(seed, g, h1);
    // burn a few cells so the ring holds computed values, ending on an
    // active (odd) index
    StepOutput z{};
    std::array<double, 5> s{};
    std::vector<StepOutput> hist;
    for (int i = 0; i < 11; ++i) {
      z = step(st, g, h1);
      hist.push_back(z);
    }
    REQUIRE(st.stepIndex() % 2 == 1); // active parity
    s = {hist[hist.size() - 3].Nr, z.Nr, hist[hist.size() - 3].P,
         hist[hist.size() - 2].P, z.P};

    double worst = 0;
    for (int it = 0; it < 10000; ++it) {
      const StepOutput z1 = step(st, g, h1);
      const StepOutput z2 = step(st, g, h1);
      const auto next = reducedQ2Step(s, g, h1);
      worst = std::max(worst, std::abs(next[1] - z2.Nr));
      worst = std::max(worst, std::abs(next[3] - z1.P));
      worst = std::max(worst, std::abs(next[4] - z2.P));
      s = {s[1], z2.Nr, s[4], z1.P, z2.P}; // resync to avoid drift accumulation
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("reduced fixed point is a short orbit of the full system") {
  const ModelParams h1 = preset("H1");
  const StepGrid g = buildGrid(2.0, h1);

  // the extinction state is an exact fixed point when R(0) = 0
  const std::array<double, 5> dead{0, 0, 0, 0, 0};
  const auto img = reducedQ2Step(dead, g, h1);
  for (int i = 0; i < 5; ++i) CHECK(img[i] == 0.0);

  RingState st = stateFromReduced(dead, g, h1);
  const StepOutput z1 = step(st, g, h1);
  const StepOutput z2 = step(st, g, h1);
  const StepOutput z3 = step(st, g, h1);
  const StepOutput z4 = step(st, g, h1);
  // period 2 cells in Z, hence period 2*ceil(q) = 4 as well
  CHECK(z1.Nr == z3.Nr);
  CHECK(z2.Nr == z4.Nr);
  CHECK(z2.Nr == 0.0); // reduced coordinate stays extinct
  CHECK(z2.P == 0.0);
}

TEST_CASE("zero-population vector rebounds through the plateau") {
  const ModelParams h1 = preset("H1");
  const StepGrid g = buildGrid(2.0, h1);
  const auto next = reducedQ2Step({0, 0, 1, 1, 1}, g, h1);
  CHECK(next[0] == 0.0);
  // N_{r,k+2} = m(0) R(P) = 5 * 0.5
  CHECK(next[1] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(next[3] > 0.0);
}

TEST_SUITE_END();
