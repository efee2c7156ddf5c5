#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Symbolic-dynamics entropy and box-counting dimension estimators, plus
// the robust regression and rank-correlation helpers they share.

namespace ybm {

// Biased sample autocorrelation, acf[0] = 1, lags 0..maxLag. Switches to
// an FFT convolution when the direct sum gets expensive. A constant
// series has no variance and is rejected.
std::vector<double> autocorrelation(const std::vector<double>& x, int maxLag);

struct NoDecorrelation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FirstZero {
  int lag = 0;          // samples
  double acfValue = 0;  // acf at the crossing
  bool flagged = false; // |acf(lag)| >= threshold
};

// First sign change of the acf; throws NoDecorrelation when none occurs.
FirstZero firstZero(const std::vector<double>& acf, double threshold = 1e-2);

// Signs (+1/-1) of the log-returns of the series sampled every `stride`
// samples. Zero returns count as +1; a zero sample is a domain error.
std::vector<int> signReturns(const std::vector<double>& series, int stride);

// Plug-in Shannon entropy (bits) of the sliding K-block distribution.
double combinatorialEntropy(const std::vector<int>& signs, int K);

struct RobustFit {
  double slope = 0;
  double intercept = 0;
  int iterations = 0;
  std::vector<double> residuals;
};

// Iteratively reweighted least squares with Huber weights
// (tuning constant 1.345; 20 iterations or relative change < 1e-8).
RobustFit huberLine(const std::vector<double>& x, const std::vector<double>& y,
                    double tuning = 1.345, int maxIter = 20, double rtol = 1e-8);

struct EntropyReport {
  double tauStarYears = 0;
  int tauStarSamples = 0;
  double acfAtTauStar = 0;
  bool acfFlagged = false;
  std::vector<double> HK;   // K = 1..12
  double slope = 0;         // bits per symbol
  RobustFit fit;
};

// Full pipeline: acf -> first zero -> sign returns -> H_K for K=1..12 ->
// robust slope. sampleSpacing converts between samples and years.
EntropyReport entropyReport(const std::vector<double>& series, double sampleSpacing,
                            double maxLagYears = 100.0, double acfThreshold = 1e-2);

struct BoxCountReport {
  std::vector<double> epsilons;
  std::vector<std::int64_t> counts;
  double dimension = 0;
  std::vector<int> fitRange; // indices used by the regression
};

// Occupied-cube counts over the given box sizes and the dimension from a
// robust fit of log(count) on log(eps). Saturated scales (count equal to
// the number of points) and scales with fewer than 10 boxes are excluded
// from the fit.
BoxCountReport boxCount(const std::vector<std::array<double, 3>>& pts,
                        const std::vector<double>& epsilons);

// diameter * 2^-j for j = jmin..jmax.
std::vector<double> defaultEpsilons(const std::vector<std::array<double, 3>>& pts,
                                    int jmin = 2, int jmax = 7);

// Spearman rank correlation with average ranks on ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace ybm
