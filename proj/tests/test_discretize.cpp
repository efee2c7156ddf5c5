#include <doctest.h>

#include <cmath>
#include <random>

#include "ybm/discretize.hpp"
#include "ybm/noise.hpp"

using namespace ybm;

TEST_SUITE_BEGIN("discretize");

namespace {
double relErr(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}
} // namespace

TEST_CASE("grid indices follow the rounding rules") {
  const ModelParams h1 = preset("H1");
  const StepGrid g2 = buildGrid(2.0, h1);
  CHECK(g2.kA0 == 1);
  CHECK(g2.kA1 == 3);
  CHECK(g2.kOmega0 == 1);
  CHECK(g2.kOmega1 == 3);

  const StepGrid g100 = buildGrid(100.0, h1);
  CHECK(g100.kA0 == 18);
  CHECK(g100.kA1 == 199);

  const StepGrid g1 = buildGrid(1.0, h1);
  CHECK(g1.kA0 == 1); // max{1, round(0.18)}
  CHECK(g1.kA1 == 1);

  CHECK_THROWS_AS(buildGrid(0.5, h1), std::domain_error);
}

TEST_CASE("fractional grid partitions the year") {
  const ModelParams h1 = preset("H1");
  const StepGrid g = buildGrid(5.5, h1);
  CHECK(g.cellsPerYear == 6);
  CHECK(g.dtRegular == doctest::Approx(1.0 / 5.5).epsilon(1e-15));
  CHECK(g.dtLast == doctest::Approx(0.5 / 5.5).epsilon(1e-15));
  CHECK(g.dtRegular * 5 + g.dtLast == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 1; k <= 12; ++k) {
    const double w = cellWidth(k, g);
    if (k % 6 == 0)
      CHECK(w == g.dtLast);
    else
      CHECK(w == g.dtRegular);
  }
  CHECK(cellRightTime(6, g) == 1.0);
  CHECK(cellRightTime(12, g) == 2.0);

  const StepGrid gi = buildGrid(5.0, h1);
  CHECK(gi.dtLast == gi.dtRegular); // integer q: no short cell
}

TEST_CASE("seasonality cell averages at q=2") {
  const ModelParams h1 = preset("H1"); // rho = 0.79, season on [0, 0.21)
  const StepGrid g = buildGrid(2.0, h1);
  // cells ((k-1)/2, k/2]: the season sits in the first half of each year
  for (int k = 1; k <= 8; ++k) {
    const double want = k % 2 == 1 ? 2.0 : 0.0;
    CHECK(seasonalityAtIndex(k, g, h1) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("seasonality cell averages: full-period and uniform cases") {
  ModelParams p = preset("H1");
  const StepGrid g1 = buildGrid(1.0, p);
  for (int k = 1; k <= 5; ++k)
    CHECK(seasonalityAtIndex(k, g1, p) == doctest::Approx(1.0).epsilon(1e-14));
  p.rho = 0.0;
  for (double q : {2.0, 3.0, 5.5}) {
    const StepGrid g = buildGrid(q, p);
    for (int k = 1; k <= 3 * g.cellsPerYear; ++k)
      CHECK(seasonalityAtIndex(k, g, p) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("cell averages integrate the season exactly over a year") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ModelParams p = preset("H1");
    p.rho = 0.99 * u(rng);
    const double q = 1.0 + 30.0 * u(rng);
    const StepGrid g = buildGrid(q, p);
    double sum = 0;
    for (int k = 1; k <= g.cellsPerYear; ++k)
      sum += cellWidth(k, g) * seasonalityAtIndex(k, g, p);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("initial state determinism and uniform law") {
  const ModelParams h1 = preset("H1");
  const StepGrid g = buildGrid(2.0, h1);
  const RingState a = RingState::initial(42, g, h1);
  const RingState b = RingState::initial(42, g, h1);
  CHECK(a.stepIndex() == b.stepIndex());
  for (std::int64_t i = a.stepIndex() - g.historyDepth() + 1; i <= a.stepIndex(); ++i) {
    CHECK(a.brAt(i) == b.brAt(i));
    CHECK(a.bbAt(i) == b.bbAt(i));
  }
  // mean of U[0, 2/3] over many draws
  const int nStates = 200000; // 3 slots each -> 6e5 draws per channel
  double sum = 0;
  std::int64_t n = 0;
  for (int s = 0; s < nStates; ++s) {
    const RingState st = RingState::initial(1000 + s, g, h1);
    for (std::int64_t i = st.stepIndex() - 2; i <= st.stepIndex(); ++i) {
      sum += st.brAt(i);
      ++n;
    }
  }
  const double mean = sum / n;
  const double se = (2.0 / 3.0) / std::sqrt(12.0 * n);
  CHECK(std::abs(mean - 1.0 / 3.0) < 3.0 * se);
}

TEST_CASE("golden first step at q=2 under H1") {
  // Hand-derived before the build from the six update rules with history
  // Br = Bb = [0.2, 0.2, 0.2] and price 1: the first computed cell opens a
  // year, so the season is active (average 2).
  const ModelParams h1 = preset("H1");
  const StepGrid g = buildGrid(2.0, h1);
  RingState st = RingState::fromHistory({0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}, 1.0, g);
  const StepOutput z = step(st, g, h1);
  CHECK(relErr(z.Nr, 0.6) <= 1e-14);
  CHECK(relErr(z.Nb, 0.6) <= 1e-14);
  CHECK(relErr(z.S, 0.4) <= 1e-14);
  CHECK(relErr(z.P, 1.3213805041134338) <= 1e-14);
  CHECK(relErr(z.Br, 4.644873064410019) <= 1e-14);
  CHECK(relErr(z.Bb, 5.355126935589981) <= 1e-14);

  const StepOutput z2 = step(st, g, h1);
  CHECK(relErr(z2.Nr, 5.044873064410019) <= 1e-14);
  CHECK(relErr(z2.Nb, 5.755126935589981) <= 1e-14);
  CHECK(relErr(z2.S, 3.8367512903933207) <= 1e-14);
  CHECK(relErr(z2.P, 1.0015611635415600) <= 1e-14);
  CHECK(z2.Br == 0.0); // off-season cell
  CHECK(z2.Bb == 0.0);
}

TEST_CASE("noise term vanishes when sigma is zero") {
  const ModelParams h1 = preset("H1"); // sigma = 0
  const StepGrid g = buildGrid(2.0, h1);
  RingState a = RingState::fromHistory({0.1, 0.2, 0.3}, {0.3, 0.2, 0.1}, 1.0, g);
  RingState b = RingState::fromHistory({0.1, 0.2, 0.3}, {0.3, 0.2, 0.1}, 1.0, g);
  const StepOutput za = step(a, g, h1, 0.7);
  const StepOutput zb = step(b, g, h1);
  CHECK(za.P == zb.P);
  CHECK(za.Br == zb.Br);
}

TEST_CASE("empty population rebounds from the fertility plateau") {
  const ModelParams h1 = preset("H1");
  const StepGrid g = buildGrid(2.0, h1);
  RingState st = RingState::fromHistory({0, 0, 0}, {0, 0, 0}, 1.0, g);
  const StepOutput z = step(st, g, h1);
  CHECK(z.Nr == 0.0);
  CHECK(z.S == 0.0);
  // demand exceeds zero supply: price rises, births restart at m(0) = m0
  const double pWant = 1.0 + 0.5 * 1.0 * 1.0; // F(D(1), 0) = 1
  CHECK(z.P == doctest::Approx(pWant).epsilon(1e-15));
  CHECK(z.Br == doctest::Approx(5.0 * breederFraction(z.P, h1)).epsilon(1e-14));
}

TEST_CASE("simulate step counts and recording") {
  const ModelParams h1 = preset("H1");
  SUBCASE("integer q") {
    const StepGrid g = buildGrid(2.0, h1);
    const Trajectory tr = simulate(7, g, h1, {1, 0.0, 0.0});
    CHECK(tr.steps.size() == 2);
    CHECK(tr.annualT.size() == 1);
    CHECK(tr.annualT[0] == 1.0);
    CHECK(tr.annualNr[0] == tr.steps.back().Nr);
  }
  SUBCASE("fractional q partitions into 6 widths") {
    const StepGrid g = buildGrid(5.5, h1);
    const Trajectory tr = simulate(7, g, h1, {1, 0.0, 0.0});
    REQUIRE(tr.steps.size() == 6);
    for (std::size_t i = 1; i < tr.stepT.size(); ++i) {
      const double w = tr.stepT[i] - tr.stepT[i - 1];
      const double want = i == 5 ? 0.5 / 5.5 : 1.0 / 5.5;
      CHECK(w == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("simulate is deterministic in the seed") {
  const ModelParams h1 = preset("H1");
  const StepGrid g = buildGrid(3.0, h1);
  const Trajectory a = simulate(123, g, h1, {50, 0.0, 0.0});
  const Trajectory b = simulate(123, g, h1, {50, 0.0, 0.0});
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].Nr == b.steps[i].Nr);
    CHECK(a.steps[i].P == b.steps[i].P);
    CHECK(a.steps[i].Br == b.steps[i].Br);
  }
  const Trajectory c = simulate(124, g, h1, {50, 0.0, 0.0});
  bool differs = false;
  for (std::size_t i = 0; i < a.steps.size() && !differs; ++i)
    differs = a.steps[i].Nr != c.steps[i].Nr;
  CHECK(differs);
}

TEST_CASE("stochastic runs replay under the same frozen noise") {
  ModelParams p = preset("H1");
  p.sigma = 0.1;
  const StepGrid g = buildGrid(4.0, p);
  const NoisePath noise(99);
  const Trajectory a = simulate(5, g, p, {30, 0.0, 0.0}, &noise);
  const Trajectory b = simulate(5, g, p, {30, 0.0, 0.0}, &noise);
  for (std::size_t i = 0; i < a.steps.size(); ++i) CHECK(a.steps[i].P == b.steps[i].P);
  const NoisePath other(100);
  const Trajectory c = simulate(5, g, p, {30, 0.0, 0.0}, &other);
  bool differs = false;
  for (std::size_t i = 0; i < a.steps.size() && !differs; ++i)
    differs = a.steps[i].P != c.steps[i].P;
  CHECK(differs);
}

TEST_CASE("divergence aborts with the offending step index") {
  ModelParams p = preset("H1");
  p.lambdaMkt = 1e300; // price overflows within a few cells
  const StepGrid g = buildGrid(2.0, p);
  try {
    simulate(1, g, p, {10, 0.0, 0.0});
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.stepIndex > 0);
    CHECK(std::string(e.what()).find(std::to_string(e.stepIndex)) != std::string::npos);
  }
}

TEST_CASE("boundedness after burn-in (discrete analogue of the Nmax bound)") {
  for (const char* name : {"H1", "H2"}) {
    const ModelParams p = preset(name);
    const DerivedConstants dc = derivedConstants(p);
    const double burnIn = std::ceil(p.A1) + 5;
    for (double q : {2.0, 3.0, 10.0, 100.0}) {
      const StepGrid g = buildGrid(q, p);
      const Trajectory tr = simulate(2024, g, p, {200, burnIn, burnIn});
      for (const auto& z : tr.steps) {
        CHECK(z.Nr <= dc.Nmax * (1 + 1e-9));
        CHECK(z.Nr >= 0.0);
        CHECK(z.P >= 0.0);
        CHECK(z.S >= 0.0);
      }
    }
  }
}

TEST_CASE("non-negativity under randomized valid parameters") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::int64_t stepsChecked = 0;
  while (stepsChecked < 1000000) {
    ModelParams p;
    p.A0 = 0.1 + u(rng);
    p.A1 = p.A0 + 0.2 + 2.0 * u(rng);
    p.Omega0 = p.A0;
    p.Omega1 = p.A1;
    p.m0 = 0.5 + 10.0 * u(rng);
    p.gamma = 1.0 + 8.0 * u(rng);
    p.rho = 0.95 * u(rng);
    p.D0 = 0.5 + 10.0 * u(rng);
    p.alphaD = 0.2 + 3.0 * u(rng);
    p.R0 = 0.3 * u(rng);
    p.R1 = p.R0 + (1.0 - p.R0) * std::max(0.05, u(rng));
    p.d = 0.5 + 5.0 * u(rng);
    p.lambdaMkt = 0.2 + 3.0 * u(rng);
    p.sigma = u(rng) < 0.5 ? 0.0 : 0.3 * u(rng);
    REQUIRE(validate(p).ok());
    const double q = 1.0 + 12.0 * u(rng);
    const StepGrid g = buildGrid(q, p);
    const NoisePath noise(rng());
    const Trajectory tr = simulate(rng(), g, p, {400, 0.0, 0.0}, &noise);
    for (const auto& z : tr.steps) {
      CHECK(z.Nr >= 0.0);
      CHECK(z.Nb >= 0.0);
      CHECK(z.S >= 0.0);
      CHECK(z.P >= 0.0);
      CHECK(z.Br >= 0.0);
      CHECK(z.Bb >= 0.0);
    }
    stepsChecked += static_cast<std::int64_t>(tr.steps.size());
  }
}

TEST_CASE("delay embedding shapes and degeneracies") {
  CHECK_THROWS_AS(delayEmbed({1.0, 2.0}, 3, 1), std::domain_error);
  const std::vector<double> five{1, 2, 3, 4, 5};
  CHECK(delayEmbed(five, 3, 1).size() == 3);
  const auto diag = delayEmbed(std::vector<double>(10, 2.5), 3, 1);
  for (const auto& pt : diag) {
    CHECK(pt[0] == 2.5);
    CHECK(pt[1] == 2.5);
    CHECK(pt[2] == 2.5);
  }
  // period-2 series: exactly two distinct embedded points
  std::vector<double> ab;
  for (int i = 0; i < 10; ++i) ab.push_back(i % 2 ? 2.0 : 1.0);
  const auto pts = delayEmbed(ab, 3, 1);
  for (std::size_t i = 2; i < pts.size(); ++i) CHECK(pts[i] == pts[i - 2]);
  CHECK(pts[0] != pts[1]);
}

TEST_SUITE_END();
