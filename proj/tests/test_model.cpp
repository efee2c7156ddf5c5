#include <doctest.h>

#include <cmath>
#include <random>

#include "test_oracles.hpp"
#include "ybm/model.hpp"

using namespace ybm;

TEST_SUITE_BEGIN("model");

TEST_CASE("fertility plateau and decay") {
  ModelParams p = preset("H1");
  CHECK(fertility(0.5, p) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(fertility(1.0, p) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(fertility(2.0, p) == doctest::Approx(0.016423758110424112).epsilon(1e-13));
  CHECK_THROWS_AS(fertility(-1.0, p), std::domain_error);
  // monotone non-increasing
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    CHECK(fertility(a, p) >= fertility(b, p));
  }
}

TEST_CASE("seasonality step shape and periodicity") {
  ModelParams p = preset("H1"); // rho = 0.79
  CHECK(seasonality(0.1, p) == doctest::Approx(1.0 / 0.21).epsilon(1e-13));
  CHECK(seasonality(0.95, p) == 0.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    CHECK(seasonality(t, p) == seasonality(t + 1.0, p));
  }
}

TEST_CASE("seasonality integrates to one over a period") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int i = 0; i < 20; ++i) {
    ModelParams p;
    p.rho = i == 0 ? 0.0 : u(rng);
    // exact two-piece quadrature: the density is constant on each piece
    const double s = 1.0 - p.rho;
    const double integral =
        s * seasonality(0.5 * s, p) + (p.rho > 0 ? p.rho * seasonality(s + 0.5 * p.rho, p) : 0.0);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(seasonalityIntegral(1.0, p.rho) - seasonalityIntegral(0.0, p.rho) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("demand evaluates and decays") {
  ModelParams p = preset("H1");
  CHECK(demand(0.0, p) == 5.0);
  CHECK(demand(std::log(5.0), p) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(demand(-0.1, p), std::domain_error);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(demand(a, p) > demand(b, p));
  }
}

TEST_CASE("breeder fraction branches meet at the threshold") {
  ModelParams p = preset("H1"); // R0=0, R1=1, P0=1, d=4
  CHECK(breederFraction(0.0, p) == 0.0);
  CHECK(breederFraction(1.0, p) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(breederFraction(3.0, p) == doctest::Approx(0.99999988746483794).epsilon(1e-13));
  CHECK(std::abs(breederFraction(1.0 - 1e-9, p) - 0.5) < 1e-6);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    CHECK(breederFraction(a, p) <= breederFraction(b, p));
  }
  ModelParams bad = p;
  bad.P0 = 0.0;
  CHECK_THROWS_AS(breederFraction(1.0, bad), std::domain_error);
}

TEST_CASE("market pressure sign and antisymmetry") {
  CHECK(marketPressure(5.0, 5.0) == 0.0);
  CHECK(marketPressure(5.0, 0.0) == 1.0);
  CHECK(marketPressure(2.0, 6.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(marketPressure(0.0, 0.0) == 0.0);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double d = u(rng), s = u(rng);
    CHECK(marketPressure(d, s) == -marketPressure(s, d));
  }
}

TEST_CASE("derived constants match the alignment-sweep oracle on H1") {
  const ModelParams p = preset("H1");
  const DerivedConstants dc = derivedConstants(p);
  CHECK(dc.c1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dc.c0 == doctest::Approx(1.0 + 0.03 / 0.21).epsilon(1e-9));
  CHECK(dc.Nmax == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(dc.L1 == doctest::Approx(2.0 * 5.0 / 0.21).epsilon(1e-12));
  CHECK(dc.Nmin == 0.0);     // R0 = 0
  CHECK_FALSE(dc.persistenceOK);

  const auto [lo, hi] = oracle::windowExtrema(p.A1 - p.A0, p.rho);
  CHECK(dc.c0 == doctest::Approx(lo).epsilon(1e-6));
  CHECK(dc.c1 == doctest::Approx(hi).epsilon(1e-6));
}

TEST_CASE("uniform seasonality collapses the window integral") {
  ModelParams p = preset("H1");
  p.rho = 0.0;
  const DerivedConstants dc = derivedConstants(p);
  CHECK(dc.c0 == doctest::Approx(p.A1 - p.A0).epsilon(1e-12));
  CHECK(dc.c1 == doctest::Approx(p.A1 - p.A0).epsilon(1e-12));
}

TEST_CASE("derived constants ordering over randomized parameters") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    ModelParams p;
    p.A0 = 0.05 + 2.0 * u(rng);
    p.A1 = p.A0 + 0.05 + 3.0 * u(rng);
    p.Omega0 = p.A0;
    p.Omega1 = p.A1;
    p.rho = 0.99 * u(rng);
    p.m0 = 0.1 + 20.0 * u(rng);
    p.gamma = 1.0 + 9.0 * u(rng);
    p.R0 = 0.5 * u(rng);
    p.R1 = p.R0 + (1.0 - p.R0) * u(rng);
    REQUIRE(validate(p).ok());
    const DerivedConstants dc = derivedConstants(p);
    CHECK(dc.c0 <= dc.c1 + 1e-12);
    CHECK(dc.Nmin <= dc.Nmax + 1e-12);
    CHECK(dc.Nmin >= 0.0);
    // independent oracle on a thinned subset
    if (i % 500 == 0) {
      const auto [lo, hi] = oracle::windowExtrema(p.A1 - p.A0, p.rho, 4000);
      CHECK(dc.c0 == doctest::Approx(lo).epsilon(5e-4));
      CHECK(dc.c1 == doctest::Approx(hi).epsilon(5e-4));
    }
  }
}

TEST_CASE("validator accepts shipped presets and rejects bad fields") {
  const auto h1 = validate(preset("H1"));
  CHECK(h1.ok());
  CHECK(h1.warnings.size() == 1); // R0 = 0 downgraded to a warning
  CHECK(validate(preset("H2")).ok());
  CHECK(validate(preset("FIG1")).ok());

  ModelParams p = preset("H1");
  p.gamma = 0.5;
  CHECK_FALSE(validate(p).ok());
  p = preset("H1");
  p.rho = 1.0;
  CHECK_FALSE(validate(p).ok());
  p = preset("H1");
  p.alphaD = -1.0;
  CHECK_FALSE(validate(p).ok());
  p = preset("H1");
  p.lambdaMkt = 0.0;
  CHECK_FALSE(validate(p).ok());
  CHECK_THROWS_AS(preset("H9"), std::invalid_argument);
}

TEST_CASE("price band inverts the demand interval") {
  ModelParams p = preset("H1");
  DerivedConstants dc = derivedConstants(p);

  SUBCASE("raw band from synthetic supply bounds") {
    dc.Smin = 1.0;
    dc.Smax = 2.0;
    const auto band = priceBand(p, dc, 1.0);
    REQUIRE(band.has_value());
    CHECK(band->lo == doctest::Approx(std::log(2.5)).epsilon(1e-13));
    CHECK(band->hi == doctest::Approx(std::log(5.0)).epsilon(1e-13));
  }
  SUBCASE("zero lower edge when Smax touches D0") {
    dc.Smin = 1.0;
    dc.Smax = 5.0; // = D0: Pmin would be 0 but the precondition wants D0 > Smax
    CHECK_FALSE(priceBand(p, dc, 1.0).has_value());
    dc.Smax = 5.0 - 1e-12;
    const auto band = priceBand(p, dc, 1.0);
    REQUIRE(band.has_value());
    CHECK(band->lo == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("unavailable band") {
    dc.Smin = 6.0; // > D0
    dc.Smax = 7.0;
    CHECK_FALSE(priceBand(p, dc, 2.0).has_value());
    dc.Smin = 0.0; // H1's real Smin
    dc.Smax = 2.0;
    CHECK_FALSE(priceBand(p, dc, 2.0).has_value());
  }
}

TEST_CASE("parameter file round trip and unknown keys") {
  const ModelParams p = preset("H2");
  const std::string text = formatModelParams(p);
  const ModelParams q = parseModelParams(text, preset("H1"));
  CHECK(q.A0 == p.A0);
  CHECK(q.m0 == p.m0);
  CHECK(q.gamma == p.gamma);
  CHECK(q.alphaD == p.alphaD);

  CHECK_THROWS_WITH_AS(parseModelParams("bogusKey = 1\n", p), doctest::Contains("bogusKey"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parseModelParams("m0 = twelve\n", p), std::invalid_argument);
  // sections and comments are tolerated
  const ModelParams r =
      parseModelParams("[model]\n# comment\nrho = 0.5\n", preset("H1"));
  CHECK(r.rho == 0.5);
}

TEST_SUITE_END();
