#include "ybm/discretize.hpp"

#include <cfenv>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ybm {

namespace {

// Closest integer with ties to even (the default FP rounding mode).
std::int64_t roundHalfEven(double x) {
  return static_cast<std::int64_t>(std::nearbyint(x));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Recompute a delay-window sum directly from the ring.
template <typename Ring>
double windowSum(const Ring& at, std::int64_t k, int j0, int j1) {
  double s = 0;
  for (int j = j0; j <= j1; ++j) s += at(k - j);
  return s;
}

} // namespace

StepGrid buildGrid(double q, const ModelParams& p) {
  if (!(q >= 1.0)) throw std::domain_error("buildGrid: q must be >= 1");
  StepGrid g;
  g.q = q;
  g.cellsPerYear = static_cast<int>(std::ceil(q));
  g.fracQ = q - std::floor(q);
  g.dtRegular = 1.0 / q;
  g.dtLast = g.fracQ == 0.0 ? g.dtRegular : g.fracQ / q;
  auto lowIndex = [&](double age) {
    return static_cast<int>(std::max<std::int64_t>(1, roundHalfEven(q * age)));
  };
  g.kA0 = lowIndex(p.A0);
  g.kA1 = static_cast<int>(std::max<std::int64_t>(g.kA0, roundHalfEven(q * p.A1) - 1));
  g.kOmega0 = lowIndex(p.Omega0);
  g.kOmega1 = static_cast<int>(std::max<std::int64_t>(g.kOmega0, roundHalfEven(q * p.Omega1) - 1));
  return g;
}

double cellWidth(std::int64_t k, const StepGrid& g) {
  const std::int64_t pos = (k - 1) % g.cellsPerYear; // 0-based within the year
  return pos == g.cellsPerYear - 1 ? g.dtLast : g.dtRegular;
}

double cellRightTime(std::int64_t k, const StepGrid& g) {
  const std::int64_t year = (k - 1) / g.cellsPerYear;
  const std::int64_t pos = (k - 1) % g.cellsPerYear;
  if (pos == g.cellsPerYear - 1) return static_cast<double>(year + 1);
  return static_cast<double>(year) + static_cast<double>(pos + 1) / g.q;
}

double seasonalityAtIndex(std::int64_t k, const StepGrid& g, const ModelParams& p) {
  if (k < 1) throw std::domain_error("seasonalityAtIndex: k must be >= 1");
  const std::int64_t year = (k - 1) / g.cellsPerYear;
  const std::int64_t pos = (k - 1) % g.cellsPerYear;
  const double lo = static_cast<double>(year) + static_cast<double>(pos) / g.q;
  const double hi = cellRightTime(k, g);
  const double width = pos == g.cellsPerYear - 1 ? g.dtLast : g.dtRegular;
  return (seasonalityIntegral(hi, p.rho) - seasonalityIntegral(lo, p.rho)) / width;
}

RingState RingState::initial(std::uint64_t seed, const StepGrid& g,
                             const ModelParams& /*p*/, double initialPrice) {
  if (initialPrice < 0) throw std::domain_error("initial price must be >= 0");
  RingState st;
  const int H = g.historyDepth();
  st.br_.assign(static_cast<std::size_t>(H) + 1, 0.0);
  st.bb_.assign(static_cast<std::size_t>(H) + 1, 0.0);
  st.kA0_ = g.kA0;
  st.kA1_ = g.kA1;
  st.kOmega0_ = g.kOmega0;
  st.kOmega1_ = g.kOmega1;
  st.windowA_ = g.kA1 - g.kA0 + 1;
  st.windowOmega_ = g.kOmega1 - g.kOmega0 + 1;
  st.cellsPerYear_ = g.cellsPerYear;

  // Year-aligned start: the most recent history entry closes a year, so
  // the first computed step opens one.
  const std::int64_t cpy = g.cellsPerYear;
  st.k_ = cpy * ((H + cpy - 1) / cpy);

  std::mt19937_64 rng(seed);
  const double scale = 2.0 / st.windowA_;
  for (std::int64_t i = st.k_ - H + 1; i <= st.k_; ++i)
    st.br_[st.slot(i)] = scale * uniform01(rng);
  for (std::int64_t i = st.k_ - H + 1; i <= st.k_; ++i)
    st.bb_[st.slot(i)] = scale * uniform01(rng);
  st.price_ = initialPrice;
  return st;
}

RingState RingState::fromHistory(const std::vector<double>& br,
                                 const std::vector<double>& bb, double price,
                                 const StepGrid& g) {
  const int H = g.historyDepth();
  if (br.size() != static_cast<std::size_t>(H) || bb.size() != br.size())
    throw std::domain_error("fromHistory: need exactly historyDepth() entries");
  if (price < 0) throw std::domain_error("fromHistory: price must be >= 0");
  for (std::size_t i = 0; i < br.size(); ++i)
    if (br[i] < 0 || bb[i] < 0)
      throw std::domain_error("fromHistory: newborn counts must be >= 0");
  RingState st = initial(0, g, ModelParams{}, price);
  for (std::int64_t i = st.k_ - H + 1; i <= st.k_; ++i) {
    st.br_[st.slot(i)] = br[static_cast<std::size_t>(i - (st.k_ - H + 1))];
    st.bb_[st.slot(i)] = bb[static_cast<std::size_t>(i - (st.k_ - H + 1))];
  }
  st.haveSums_ = false;
  return st;
}

StepOutput step(RingState& st, const StepGrid& g, const ModelParams& p,
                std::optional<double> dW, bool logPrice) {
  if (st.br_.empty()) throw std::logic_error("step: unpopulated state");
  const std::int64_t k = st.k_ + 1;
  auto brAt = [&](std::int64_t i) { return st.br_[st.slot(i)]; };
  auto bbAt = [&](std::int64_t i) { return st.bb_[st.slot(i)]; };

  // Delay-window sums. Small windows are summed directly; long ones slide
  // with a yearly exact recompute that stops rounding drift.
  const bool direct = st.windowA_ <= 32 || !st.haveSums_;
  double nr, nb;
  if (direct) {
    nr = windowSum(brAt, k, st.kA0_, st.kA1_);
    nb = windowSum(bbAt, k, st.kOmega0_, st.kOmega1_);
  } else {
    nr = st.sumNr_ + brAt(k - st.kA0_) - brAt(k - 1 - st.kA1_);
    nb = st.sumNb_ + bbAt(k - st.kOmega0_) - bbAt(k - 1 - st.kOmega1_);
    if (k % st.cellsPerYear_ == 0) {
      nr = windowSum(brAt, k, st.kA0_, st.kA1_);
      nb = windowSum(bbAt, k, st.kOmega0_, st.kOmega1_);
    }
  }

  StepOutput z;
  z.Nr = nr;
  z.Nb = nb;
  z.S = g.q * nb / st.windowOmega_;

  const double dt = cellWidth(k, g);
  const double pPrev = st.price_;
  const double pressure = marketPressure(demand(pPrev, p), z.S);
  if (logPrice) {
    const double drift = (p.lambdaMkt * pressure - 0.5 * p.sigma * p.sigma) * dt;
    const double noise = (dW && p.sigma > 0) ? p.sigma * *dW : 0.0;
    z.P = pPrev * std::exp(drift + noise);
  } else {
    double pNew = pPrev + p.lambdaMkt * pPrev * pressure * dt;
    if (dW && p.sigma > 0) pNew += p.sigma * pPrev * *dW;
    z.P = pNew > 0.0 ? pNew : 0.0;
  }

  const double mrk = seasonalityAtIndex(k, g, p);
  const double births = (mrk / g.q) * fertility(nr, p);
  const double rp = breederFraction(z.P, p);
  z.Br = births * rp;
  z.Bb = births * (2.0 - rp);
  if (g.fracQ > 0.0 && k % g.cellsPerYear == 0) {
    z.Br /= g.fracQ;
    z.Bb /= g.fracQ;
  }

  if (!(std::isfinite(z.Nr) && std::isfinite(z.Nb) && std::isfinite(z.S) &&
        std::isfinite(z.P) && std::isfinite(z.Br) && std::isfinite(z.Bb)))
    throw DivergenceError(k, "non-finite state at step " + std::to_string(k));

  st.br_[st.slot(k)] = z.Br;
  st.bb_[st.slot(k)] = z.Bb;
  st.k_ = k;
  st.price_ = z.P;
  st.sumNr_ = nr;
  st.sumNb_ = nb;
  st.haveSums_ = true;
  return z;
}

Trajectory simulate(std::uint64_t seed, const StepGrid& g, const ModelParams& p,
                    const SimWindow& w, const IncrementSource* noise,
                    double initialPrice, bool logPrice) {
  if (w.years <= 0) throw std::domain_error("simulate: years must be > 0");
  if (w.recordFrom < 0 || w.annualFrom < 0)
    throw std::domain_error("simulate: record horizons must be >= 0");

  RingState st = RingState::initial(seed, g, p, initialPrice);
  const std::int64_t k0 = st.stepIndex();
  const double t0 = cellRightTime(k0, g);
  const std::int64_t nSteps = w.years * g.cellsPerYear;

  Trajectory out;
  const double eps = 1e-9;
  for (std::int64_t s = 1; s <= nSteps; ++s) {
    const std::int64_t k = k0 + s;
    std::optional<double> dW;
    if (noise && (p.sigma > 0 || logPrice)) dW = noise->increment(k, cellWidth(k, g));
    const StepOutput z = step(st, g, p, dW, logPrice);
    const double t = cellRightTime(k, g) - t0;
    if (t >= w.recordFrom - eps) {
      out.stepT.push_back(t);
      out.steps.push_back(z);
    }
    if (k % g.cellsPerYear == 0) {
      const double year = static_cast<double>(k / g.cellsPerYear) - t0;
      if (year >= w.annualFrom - eps) {
        out.annualT.push_back(year);
        out.annualNr.push_back(z.Nr);
      }
    }
  }
  return out;
}

std::vector<std::array<double, 3>> delayEmbed(const std::vector<double>& annual,
                                              int dim, int lag) {
  if (dim != 2 && dim != 3) throw std::domain_error("delayEmbed: dim must be 2 or 3");
  if (lag < 1) throw std::domain_error("delayEmbed: lag must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(annual.size());
  const std::int64_t span = static_cast<std::int64_t>(dim - 1) * lag;
  if (n <= span) throw std::domain_error("delayEmbed: series too short");
  std::vector<std::array<double, 3>> pts;
  pts.reserve(static_cast<std::size_t>(n - span));
  for (std::int64_t i = 0; i + span < n; ++i) {
    std::array<double, 3> pt{annual[i], annual[i + lag], 0.0};
    if (dim == 3) pt[2] = annual[i + 2 * static_cast<std::int64_t>(lag)];
    pts.push_back(pt);
  }
  return pts;
}

std::array<double, 5> reducedQ2Step(const std::array<double, 5>& s,
                                    const StepGrid& g, const ModelParams& p) {
  if (g.q != 2.0 || g.kA0 != 1 || g.kOmega0 != 1 || g.kA1 != 3 || g.kOmega1 != 3)
    throw std::domain_error("reducedQ2Step: grid must have q=2, kA0=kOmega0=1, kA1=kOmega1=3");
  if (1.0 - p.rho > 0.5)
    throw std::domain_error("reducedQ2Step: season must fit in the first half-year");

  const auto [nrKm2, nrK, pKm2, pKm1, pK] = s;
  (void)pKm1; // carried by the state but not read by the forward map
  const double dt = 0.5;

  // B_{r,k} of an active cell is m(N_r,k) R(P_k): cell average 2 times 1/q.
  const double bK = fertility(nrK, p);
  const double bKm2 = fertility(nrKm2, p);
  const double rK = breederFraction(pK, p);
  const double rKm2 = breederFraction(pKm2, p);

  // Off-season cell k+1: no births, two active cells in each window.
  const double nb1 = bK * (2.0 - rK) + bKm2 * (2.0 - rKm2);
  const double s1 = g.q * nb1 / 3.0;
  double p1 = pK + p.lambdaMkt * pK * marketPressure(demand(pK, p), s1) * dt;
  p1 = p1 > 0.0 ? p1 : 0.0;

  // Active cell k+2: only B_{.,k} remains in the windows.
  const double nr2 = bK * rK;
  const double nb2 = bK * (2.0 - rK);
  const double s2 = g.q * nb2 / 3.0;
  double p2 = p1 + p.lambdaMkt * p1 * marketPressure(demand(p1, p), s2) * dt;
  p2 = p2 > 0.0 ? p2 : 0.0;

  return {nrK, nr2, pK, p1, p2};
}

} // namespace ybm
