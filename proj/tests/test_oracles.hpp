#pragma once

// Test-side oracles, independent of the library implementation paths they
// check.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

// Length of the intersection of the circular arc [a, a+len) with [0, s),
// all lengths < 1, a in [0, 1).
inline double circleOverlap(double a, double len, double s) {
  auto seg = [&](double lo, double hi) { // intersect [lo,hi) with [0,s)
    return std::max(0.0, std::min(hi, s) - std::max(lo, 0.0));
  };
  if (a + len <= 1.0) return seg(a, a + len);
  return seg(a, 1.0) + seg(0.0, a + len - 1.0);
}

// Integral of the step seasonality (height 1/(1-rho) on [0,1-rho) mod 1)
// over a window of length L anchored at circular position a.
inline double windowIntegral(double a, double L, double rho) {
  const double s = 1.0 - rho;
  const double full = std::floor(L);
  const double part = L - full;
  return full + circleOverlap(a, part, s) / s;
}

// Sweep of window alignments: returns {min, max} of the window integral.
inline std::pair<double, double> windowExtrema(double L, double rho, int nSweep = 20000) {
  double lo = 1e300, hi = -1e300;
  std::vector<double> anchors;
  for (int i = 0; i < nSweep; ++i) anchors.push_back(static_cast<double>(i) / nSweep);
  const double part = L - std::floor(L);
  // breakpoints of the overlap function
  for (double b : {0.0, 1.0 - rho, 1.0 - part, 1.0 - rho - part}) {
    double x = b - std::floor(b);
    anchors.push_back(x);
    anchors.push_back(x + 1e-12);
    anchors.push_back(x - 1e-12 < 0 ? x - 1e-12 + 1 : x - 1e-12);
  }
  for (const double a : anchors) {
    const double v = windowIntegral(a, L, rho);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

// Feasible transport plan by the northwest-corner rule; its cost bounds
// the exact optimum from above.
inline double northwestCost(std::vector<double> r, std::vector<double> c,
                            const std::vector<double>& M, int d) {
  double cost = 0;
  int i = 0, j = 0;
  while (i < d && j < d) {
    const double move = std::min(r[i], c[j]);
    cost += move * M[static_cast<std::size_t>(i) * d + j];
    r[i] -= move;
    c[j] -= move;
    if (r[i] <= c[j]) ++i; else ++j;
  }
  return cost;
}

inline std::vector<double> randomSimplex(std::mt19937_64& rng, int d, double floor = 1e-6) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> v(d);
  double s = 0;
  for (double& x : v) {
    x = u(rng);
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

} // namespace oracle
