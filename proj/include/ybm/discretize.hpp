#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ybm/model.hpp"

// Time discretization of the model at q steps per year (q real, >= 1).
// Each year is split into ceil(q) cells; the first floor(q) cells are
// 1/q years wide and, for non-integer q, the last one is frac(q)/q wide.
// Discrete quantities at index k live on the k-th cell; population-like
// values are cell averages, newborn counts are cell integrals.

namespace ybm {

struct StepGrid {
  double q = 2.0;
  int cellsPerYear = 2;  // ceil(q)
  int kA0 = 1, kA1 = 1;
  int kOmega0 = 1, kOmega1 = 1;
  double dtRegular = 0.5;
  double dtLast = 0.5;   // frac(q)/q, equals dtRegular for integer q
  double fracQ = 0.0;

  int historyDepth() const { return kA1 > kOmega1 ? kA1 : kOmega1; }
  bool isIntegerQ() const { return fracQ == 0.0; }
};

// Index bounds use round-half-to-even "closest integer" and the clamps
// that keep the delay sums causal and non-empty.
StepGrid buildGrid(double q, const ModelParams& p);

// Width of the k-th cell (k >= 1).
double cellWidth(std::int64_t k, const StepGrid& g);

// Right endpoint of the k-th cell, in years from the global origin.
double cellRightTime(std::int64_t k, const StepGrid& g);

// Average of the seasonality over the k-th cell, by exact piecewise
// integration of the step function.
double seasonalityAtIndex(std::int64_t k, const StepGrid& g, const ModelParams& p);

struct StepOutput {
  double Nr = 0; // reproducing females, cell average
  double Nb = 0; // butchery-line population, cell average
  double S = 0;  // supply rate
  double P = 0;  // price
  double Br = 0; // newborns put in the reproducing line this cell
  double Bb = 0; // newborns put in the butchery line this cell
};

// Thrown when a state variable leaves the finite range.
struct DivergenceError : std::runtime_error {
  std::int64_t stepIndex;
  DivergenceError(std::int64_t k, const std::string& what)
      : std::runtime_error(what), stepIndex(k) {}
};

// Fixed-depth circular histories of the newborn counts plus the current
// price. Owned by one thread at a time; freely transferable.
class RingState {
 public:
  // History slots are i.i.d. U[0, 2/(kA1-kA0+1)], price = initialPrice.
  // The draw sequence is fixed (all Br oldest to newest, then all Bb), so
  // equal seeds give bit-identical states.
  static RingState initial(std::uint64_t seed, const StepGrid& g,
                           const ModelParams& p, double initialPrice = 1.0);

  // Fixed history (oldest to newest, one entry per slot) for replays and
  // cross-checks; br and bb must have exactly historyDepth() entries.
  static RingState fromHistory(const std::vector<double>& br,
                               const std::vector<double>& bb, double price,
                               const StepGrid& g);

  // Global index of the most recent history entry. Initial states are
  // aligned so that stepIndex() ends a year and the first computed step
  // starts one.
  std::int64_t stepIndex() const { return k_; }
  double price() const { return price_; }

  double brAt(std::int64_t index) const { return br_[slot(index)]; }
  double bbAt(std::int64_t index) const { return bb_[slot(index)]; }

 private:
  friend StepOutput step(RingState&, const StepGrid&, const ModelParams&,
                         std::optional<double>, bool);

  std::size_t slot(std::int64_t index) const {
    return static_cast<std::size_t>(index % static_cast<std::int64_t>(br_.size()));
  }

  std::vector<double> br_, bb_; // capacity historyDepth()+1
  std::int64_t k_ = 0;
  double price_ = 1.0;
  double sumNr_ = 0, sumNb_ = 0; // delay-window sums for the last computed index
  bool haveSums_ = false;
  int windowA_ = 1, windowOmega_ = 1;
  int kA0_ = 1, kA1_ = 1, kOmega0_ = 1, kOmega1_ = 1;
  int cellsPerYear_ = 1;
};

// Advances the state by one cell and returns the new Z_k. dW, when
// present, is the Brownian increment for this cell (variance = cell
// width); it only acts when sigma > 0. logPrice selects the logarithmic
// Euler step exp((lambda*F - sigma^2/2)dt + sigma dW) used as a
// cross-check integrator; the default is the clamped multiplicative form.
StepOutput step(RingState& state, const StepGrid& g, const ModelParams& p,
                std::optional<double> dW = std::nullopt, bool logPrice = false);

// Supplies per-step Brownian increments to simulate().
struct IncrementSource {
  virtual double increment(std::int64_t k, double dt) const = 0;
  virtual ~IncrementSource() = default;
};

struct Trajectory {
  std::vector<double> stepT;        // years since init, recorded steps
  std::vector<StepOutput> steps;    // one per recorded step
  std::vector<double> annualT;      // integer years since init
  std::vector<double> annualNr;     // Nr of the last cell of each year
};

struct SimWindow {
  std::int64_t years = 1;      // steps taken = years * cellsPerYear
  double recordFrom = 0;       // record steps with t >= recordFrom
  double annualFrom = 0;       // record annual samples with t >= annualFrom
};

Trajectory simulate(std::uint64_t seed, const StepGrid& g, const ModelParams& p,
                    const SimWindow& w, const IncrementSource* noise = nullptr,
                    double initialPrice = 1.0, bool logPrice = false);

// Delay embedding (x(t), x(t+lag), ..., x(t+(dim-1)*lag)) of the annual
// series; dim is 2 or 3, unused coordinates are zero.
std::vector<std::array<double, 3>> delayEmbed(const std::vector<double>& annual,
                                              int dim, int lag = 1);

// One application of the reduced 5-dimensional map equivalent to two
// cells of the full q = 2 dynamics when the season fits in the first
// half-year and kA0 = kOmega0 = 1, kA1 = kOmega1 = 3. State layout:
// (Nr_{k-2}, Nr_k, P_{k-2}, P_{k-1}, P_k) anchored at a season-active k.
std::array<double, 5> reducedQ2Step(const std::array<double, 5>& s,
                                    const StepGrid& g, const ModelParams& p);

} // namespace ybm
