#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ybm/discretize.hpp"
#include "ybm/histogram.hpp"
#include "ybm/metrics.hpp"
#include "ybm/model.hpp"

// Scripted sweeps that turn the model into data files: distances vs q,
// bifurcation scans, entropy/dimension curves and the logistic-map
// validation of the distance pipeline.

namespace ybm {

struct ExperimentConfig {
  std::string presetName = "H1";
  ModelParams params;               // resolved parameter set
  std::vector<double> qGrid;        // empty = defaultQGrid()
  std::vector<double> sigmaGrid{0.0, 0.02, 0.05, 0.1, 0.2};
  std::uint64_t seed = 1;
  std::uint64_t omegaSeed = 42;     // frozen noise for stochastic sweeps
  std::int64_t tMax = 30000;        // years per run
  double analysisWindow = 10000;    // trailing years fed to the estimators
  double referenceQ = 100;
  int ng = 23;
  double initialPrice = 1.0;
  std::filesystem::path outDir = "out";
  bool paperExactLogistic = false;  // keep the logistic transient
};

void validateConfig(const ExperimentConfig& cfg);

// round(logspace(2, 100, 100)) with duplicates removed.
std::vector<double> defaultQGrid();

// Count of distinct values at the given tolerance (sorted clustering).
int distinctCount(std::vector<double> values, double tol = 1e-6);

// A run whose trailing annual samples collapse onto < 10 distinct values.
bool quasiPeriodic(const std::vector<double>& annualWindow, double tol = 1e-6,
                   int maxDistinct = 10);

struct DistanceRow {
  double q = 0;
  double kl = 0, js = 0, wasserstein = 0, sinkhorn = 0, sinkhornDualBound = 0;
  bool failed = false;
};

struct QSweepResult {
  std::vector<DistanceRow> rows;
  std::array<double, 3> boundsLo{0, 0, 0}, boundsHi{1, 1, 1}; // shared grid
  double lambdaUsed = 0;
};

// Distances of every q-attractor histogram against the reference-q
// histogram, all built on the shared bounds derived from the reference
// cloud. Failed rows carry NaNs.
QSweepResult qSweepDistances(const ExperimentConfig& cfg);

struct BifurcationResult {
  std::vector<std::pair<double, double>> samples; // (q, annual Nr)
  std::vector<double> qs;
  std::vector<int> distinct;
  std::vector<bool> quasiPeriodicFlag;
};

BifurcationResult bifurcationDiagram(const ExperimentConfig& cfg, double qLo = 1.0,
                                     double qHi = 40.0, int nQ = 400);

struct MetricRow {
  double x = 0; // q or sigma
  double entropy = 0;
  double fractalDim = 0;
  bool entropyMissing = false;
};

std::vector<MetricRow> entropyFractalVsQ(const ExperimentConfig& cfg);
std::vector<MetricRow> entropyFractalVsSigma(const ExperimentConfig& cfg);

struct LogisticRow {
  double r = 0;
  double kl = 0, js = 0, wasserstein = 0, sinkhorn = 0;
  int distinct = 0; // orbit-tail distinct values (stable-window detector)
};

struct LogisticResult {
  std::vector<LogisticRow> rows;
  int penultimateIndex = 0;
};

// Logistic-map benchmark of the distance pipeline: nR parameters evenly
// spaced on [3.5, 4], 50000 iterations each (first 1000 discarded unless
// paperExactLogistic), 500-bin histograms on [0,1], all compared against
// the penultimate one.
LogisticResult logisticValidation(const ExperimentConfig& cfg, int nR = 3000,
                                  int steps = 50000, int bins = 500,
                                  int burnIn = 1000);

// Named experiments for the CLI registry.
std::vector<std::pair<std::string, std::string>> experimentRegistry();

} // namespace ybm
