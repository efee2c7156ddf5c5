#include "ybm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ybm/noise.hpp"
#include "ybm/transport.hpp"

namespace ybm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> resolvedQGrid(const ExperimentConfig& cfg) {
  return cfg.qGrid.empty() ? defaultQGrid() : cfg.qGrid;
}

// Annual-sample trajectory over the trailing analysis window.
Trajectory windowRun(const ExperimentConfig& cfg, double q, double sigma,
                     bool recordSteps, double annualWindow) {
  ModelParams p = cfg.params;
  p.sigma = sigma;
  const StepGrid g = buildGrid(q, p);
  SimWindow w;
  w.years = cfg.tMax;
  const double tMax = static_cast<double>(cfg.tMax);
  w.recordFrom = recordSteps ? std::max(0.0, tMax - cfg.analysisWindow) : tMax + 1.0;
  w.annualFrom = std::max(0.0, tMax - annualWindow);
  NoisePath noise(cfg.omegaSeed);
  return simulate(cfg.seed, g, p, w, sigma > 0 ? &noise : nullptr, cfg.initialPrice);
}

} // namespace

void validateConfig(const ExperimentConfig& cfg) {
  const auto rep = validate(cfg.params);
  if (!rep.ok()) {
    std::string msg = "invalid parameters:";
    for (const auto& e : rep.errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
  for (const double q : cfg.qGrid)
    if (!(q >= 1.0)) throw std::invalid_argument("qGrid values must be >= 1");
  for (const double s : cfg.sigmaGrid)
    if (!(s >= 0.0)) throw std::invalid_argument("sigmaGrid values must be >= 0");
  if (cfg.tMax < 2) throw std::invalid_argument("tMax must be >= 2 years");
  if (!(cfg.analysisWindow > 0) || cfg.analysisWindow >= static_cast<double>(cfg.tMax))
    throw std::invalid_argument("analysisWindow must lie inside the run horizon");
  if (!(cfg.referenceQ >= 1.0)) throw std::invalid_argument("referenceQ must be >= 1");
  if (cfg.ng < 2) throw std::invalid_argument("ng must be >= 2");
}

std::vector<double> defaultQGrid() {
  std::vector<double> qs;
  const double lo = std::log(2.0), hi = std::log(100.0);
  for (int i = 0; i < 100; ++i) {
    const double q = std::round(std::exp(lo + (hi - lo) * i / 99.0));
    if (qs.empty() || qs.back() != q) qs.push_back(q);
  }
  return qs;
}

int distinctCount(std::vector<double> values, double tol) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  int n = 1;
  double anchor = values.front();
  for (const double v : values)
    if (v - anchor > tol) {
      ++n;
      anchor = v;
    }
  return n;
}

bool quasiPeriodic(const std::vector<double>& annualWindow, double tol, int maxDistinct) {
  return distinctCount(annualWindow, tol) < maxDistinct;
}

QSweepResult qSweepDistances(const ExperimentConfig& cfg) {
  validateConfig(cfg);
  QSweepResult res;

  const Trajectory ref = windowRun(cfg, cfg.referenceQ, 0.0, false, cfg.analysisWindow);
  const auto refCloud = delayEmbed(ref.annualNr, 3, 1);
  double mx = 0;
  for (const auto& pt : refCloud) mx = std::max({mx, pt[0], pt[1], pt[2]});
  if (!(mx > 0)) mx = 1.0;
  res.boundsLo = {0, 0, 0};
  res.boundsHi = {1.05 * mx, 1.05 * mx, 1.05 * mx};

  const Histogram refHist = buildHistogram3D(refCloud, cfg.ng, res.boundsLo, res.boundsHi);
  const double lambda = defaultLambda(refHist);
  res.lambdaUsed = lambda;
  const GridSinkhorn solver(refHist, lambda);

  for (const double q : resolvedQGrid(cfg)) {
    DistanceRow row;
    row.q = q;
    try {
      const Trajectory tr = windowRun(cfg, q, 0.0, false, cfg.analysisWindow);
      const auto cloud = delayEmbed(tr.annualNr, 3, 1);
      const Histogram h = buildHistogram3D(cloud, cfg.ng, res.boundsLo, res.boundsHi);
      if (!h.sameGeometry(refHist))
        throw std::invalid_argument("q sweep: histogram bounds drifted off the shared grid");
      row.kl = klDivergence(h, refHist);
      row.js = jsDistance(h, refHist);
      const GridTransport t = solver.run(h, refHist);
      row.sinkhorn = t.value;
      row.wasserstein = std::sqrt(std::max(t.value, 0.0));
      row.sinkhornDualBound = t.dualBound;
    } catch (const DivergenceError&) {
      row.failed = true;
      row.kl = row.js = row.wasserstein = row.sinkhorn = row.sinkhornDualBound = kNaN;
    }
    res.rows.push_back(row);
  }
  return res;
}

BifurcationResult bifurcationDiagram(const ExperimentConfig& cfg, double qLo,
                                     double qHi, int nQ) {
  validateConfig(cfg);
  if (!(qLo >= 1.0) || !(qHi > qLo) || nQ < 2)
    throw std::invalid_argument("bifurcation: need 1 <= qLo < qHi and nQ >= 2");
  BifurcationResult res;
  for (int i = 0; i < nQ; ++i) {
    const double q = qLo + (qHi - qLo) * i / (nQ - 1);
    res.qs.push_back(q);
    try {
      const Trajectory tr = windowRun(cfg, q, 0.0, false, cfg.analysisWindow);
      for (const double nr : tr.annualNr) res.samples.emplace_back(q, nr);
      res.distinct.push_back(distinctCount(tr.annualNr));
      res.quasiPeriodicFlag.push_back(quasiPeriodic(tr.annualNr));
    } catch (const DivergenceError&) {
      res.distinct.push_back(-1);
      res.quasiPeriodicFlag.push_back(false);
    }
  }
  return res;
}

namespace {

MetricRow metricsForRun(const ExperimentConfig& cfg, double x, double q, double sigma) {
  MetricRow row;
  row.x = x;
  // The fractal cloud uses a longer annual window than the entropy series
  // (two thirds of the run, capped at 200000 years).
  const double cloudWindow =
      std::min(200000.0, 2.0 * static_cast<double>(cfg.tMax) / 3.0);
  const bool integerQ = q == std::floor(q);
  const Trajectory tr = windowRun(cfg, q, sigma, integerQ, cloudWindow);

  const auto cloud = delayEmbed(tr.annualNr, 3, 1);
  const BoxCountReport bc = boxCount(cloud, defaultEpsilons(cloud));
  row.fractalDim = bc.dimension;

  try {
    if (integerQ) {
      std::vector<double> series;
      series.reserve(tr.steps.size());
      const std::size_t keep =
          static_cast<std::size_t>(cfg.analysisWindow * q + 0.5);
      const std::size_t start = tr.steps.size() > keep ? tr.steps.size() - keep : 0;
      for (std::size_t i = start; i < tr.steps.size(); ++i)
        series.push_back(tr.steps[i].Nr);
      row.entropy = entropyReport(series, 1.0 / q).slope;
    } else {
      // fractional q: the step series is unevenly spaced, use annual samples
      std::vector<double> annual = tr.annualNr;
      const std::size_t keep = static_cast<std::size_t>(cfg.analysisWindow);
      if (annual.size() > keep)
        annual.erase(annual.begin(), annual.end() - static_cast<std::ptrdiff_t>(keep));
      row.entropy = entropyReport(annual, 1.0).slope;
    }
  } catch (const NoDecorrelation&) {
    row.entropy = kNaN;
    row.entropyMissing = true;
  } catch (const std::domain_error&) {
    row.entropy = kNaN;
    row.entropyMissing = true;
  }
  return row;
}

} // namespace

std::vector<MetricRow> entropyFractalVsQ(const ExperimentConfig& cfg) {
  validateConfig(cfg);
  std::vector<MetricRow> rows;
  for (const double q : resolvedQGrid(cfg)) rows.push_back(metricsForRun(cfg, q, q, 0.0));
  return rows;
}

std::vector<MetricRow> entropyFractalVsSigma(const ExperimentConfig& cfg) {
  validateConfig(cfg);
  std::vector<MetricRow> rows;
  for (const double sigma : cfg.sigmaGrid)
    rows.push_back(metricsForRun(cfg, sigma, cfg.referenceQ, sigma));
  return rows;
}

LogisticResult logisticValidation(const ExperimentConfig& cfg, int nR, int steps,
                                  int bins, int burnIn) {
  if (nR < 3 || steps < 2 || bins < 2)
    throw std::invalid_argument("logistic: degenerate sweep sizes");
  if (cfg.paperExactLogistic) burnIn = 0;
  if (burnIn >= steps) throw std::invalid_argument("logistic: burn-in exceeds steps");

  LogisticResult res;
  res.penultimateIndex = nR - 2;

  std::vector<Histogram> hists;
  hists.reserve(static_cast<std::size_t>(nR));
  std::vector<int> distinct(static_cast<std::size_t>(nR));
  std::vector<double> tail(1000);
  for (int i = 0; i < nR; ++i) {
    const double r = 3.5 + 0.5 * i / (nR - 1);
    double x = 0.3;
    std::vector<double> orbit;
    orbit.reserve(static_cast<std::size_t>(steps - burnIn));
    for (int s = 0; s < steps; ++s) {
      x = r * x * (1.0 - x);
      if (s >= burnIn) orbit.push_back(x);
    }
    const std::size_t nTail = std::min<std::size_t>(tail.size(), orbit.size());
    tail.assign(orbit.end() - static_cast<std::ptrdiff_t>(nTail), orbit.end());
    distinct[static_cast<std::size_t>(i)] = distinctCount(tail);
    hists.push_back(buildHistogram1D(orbit, bins, 0.0, 1.0));
  }

  const Histogram& pen = hists[static_cast<std::size_t>(res.penultimateIndex)];
  const GridSinkhorn solver(pen, defaultLambda(pen));
  for (int i = 0; i < nR; ++i) {
    LogisticRow row;
    row.r = 3.5 + 0.5 * i / (nR - 1);
    row.distinct = distinct[static_cast<std::size_t>(i)];
    const Histogram& h = hists[static_cast<std::size_t>(i)];
    row.kl = klDivergence(h, pen);
    row.js = jsDistance(h, pen);
    const GridTransport t = solver.run(h, pen);
    row.sinkhorn = t.value;
    row.wasserstein = std::sqrt(std::max(t.value, 0.0));
    res.rows.push_back(row);
  }
  return res;
}

std::vector<std::pair<std::string, std::string>> experimentRegistry() {
  return {
      {"simulate", "single trajectory, CSV t,Nr,Nb,S,P plus annual samples"},
      {"pullback", "random-attractor ensemble snapshots under a frozen noise path"},
      {"bifurcate", "annual Nr samples against q, CSV q,Nr plus quasi-periodicity flags"},
      {"distances", "histogram distances to the reference-q attractor, CSV per q"},
      {"entropy", "combinatorial entropy report for one run"},
      {"fractal", "box-counting dimension report for one run"},
      {"sigma-sweep", "entropy and fractal dimension against sigma"},
      {"logistic", "logistic-map validation of the four distances"},
      {"validate-config", "check parameters and print derived constants"},
  };
}

} // namespace ybm
