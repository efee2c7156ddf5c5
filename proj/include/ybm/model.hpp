#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Response functions, parameter sets and analytically derived bound
// constants of the Yoccoz-Birkeland population-market model.
//
// Units: time in years, prices relative to the sigmoid threshold P0,
// populations in units of the density-dependence threshold.

namespace ybm {

struct ModelParams {
  double A0 = 0.18;       // first fertile age [years]
  double A1 = 2.0;        // last fertile age [years]
  double Omega0 = 0.18;   // minimal butchery age [years]
  double Omega1 = 2.0;    // maximal butchery age [years]
  double m0 = 5.0;        // fertility scale [births/year]
  double gamma = 8.25;    // density-dependence exponent, >= 1
  double rho = 0.79;      // birth-season concentration, in [0,1)
  double D0 = 5.0;        // demand at zero price [supply/year]
  double alphaD = 1.0;    // demand decay [1/price]
  double R0 = 0.0;        // breeder fraction, lower bound
  double R1 = 1.0;        // breeder fraction, upper bound
  double P0 = 1.0;        // price threshold of the breeder sigmoid
  double d = 4.0;         // degree of the breeder sigmoid
  double lambdaMkt = 1.0; // market temperature [1/year]
  double sigma = 0.0;     // price volatility [1/sqrt(year)], 0 = deterministic
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

ValidationReport validate(const ModelParams& p);

// Named parameter sets. Known keys: "H1", "H2", "FIG1".
ModelParams preset(std::string_view name);
bool isPresetName(std::string_view name);

// Bound constants implied by the parameters (see derivedConstants).
struct DerivedConstants {
  double c0 = 0;    // inf over alignments of the fertile-window seasonality integral
  double c1 = 0;    // sup of the same
  double Nmax = 0;  // m0 * R1 * c1
  double L1 = 0;    // Lipschitz constant 2 * m0 * R1 / (1 - rho)
  double Smax = 0;  // supply upper bound
  double Smin = 0;  // supply lower bound (0 when R0 = 0)
  double Nmin = 0;  // population lower bound (0 when R0 = 0)
  bool persistenceOK = false; // m0 * R0 * c0 > 2
};

// --- response functions -------------------------------------------------

// Density-dependent fertility m(N) = m0 * max{N,1}^(-gamma).
double fertility(double N, const ModelParams& p);

// 1-periodic birth-season density: 1/(1-rho) on [0, 1-rho) mod 1, else 0.
double seasonality(double t, const ModelParams& p);

// Cumulative seasonality integral from 0 to x, valid for any real x.
double seasonalityIntegral(double x, double rho);

// Exponential demand D(P) = D0 * exp(-alphaD * P).
double demand(double P, const ModelParams& p);

// Counter-cyclical breeder policy R0 + (R1-R0) * f_d(P/P0) with
// f_d(x) = x^d/2 on [0,1) and the logistic 1/(1+exp(-2d(x-1))) beyond.
double breederFraction(double P, const ModelParams& p);

// Relative market imbalance (D-S)/(D+S); 0 by convention when D+S = 0.
double marketPressure(double D, double S);

// --- derived bound constants --------------------------------------------

// Computes c0/c1 by sweeping one period of window alignments (1e5
// subdivisions plus the exact breakpoints; integration per alignment is
// exact since the seasonality is a step function), then the remaining
// constants from their defining formulas.
DerivedConstants derivedConstants(const ModelParams& p);

// Extrema of t -> integral of m_rho(t-a) da over a in [w0, w1].
// Exposed for the butchery window; derivedConstants uses [A0, A1].
std::pair<double, double> windowIntegralExtrema(double w0, double w1, double rho);

struct PriceBand {
  double lo = 0;
  double hi = 0;
};

// [Pmin/C, C*Pmax] with Pmin = D^-1(Smax), Pmax = D^-1(Smin).
// Empty when the band is undefined (Smin <= 0 or D0 <= Smax).
std::optional<PriceBand> priceBand(const ModelParams& p, const DerivedConstants& dc,
                                   double C);

// --- parameter file support ----------------------------------------------

// Applies "key = value" lines onto base. Lines that are blank, comments
// (#, ;) or [section] headers are skipped. Unknown keys throw
// std::invalid_argument naming the key.
ModelParams parseModelParams(const std::string& text, ModelParams base);

// Serializes with 17 significant digits, one "key = value" per line.
std::string formatModelParams(const ModelParams& p);

} // namespace ybm
