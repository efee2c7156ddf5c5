#pragma once

#include <array>
#include <vector>

#include "ybm/histogram.hpp"

// Statistical distances between histograms: Kullback-Leibler,
// Jensen-Shannon, quadratic Wasserstein and the entropically regularized
// Sinkhorn transport cost. Dense solvers handle generic cost matrices;
// grid histograms additionally get a tensorized kernel path that never
// materializes the d x d matrices.

namespace ybm {

inline constexpr double kSmoothingEps = 1e-10;

struct CostMatrix {
  int d = 0;
  std::vector<double> m; // row-major, zero diagonal, symmetric
  double at(int i, int j) const { return m[static_cast<std::size_t>(i) * d + j]; }
};

// Pairwise bin-center distances of a histogram grid raised to `exponent`
// (1 or 2; 2 is the Wasserstein-2 ground cost).
CostMatrix costMatrix(const Histogram& geometry, int exponent = 2);

// sum P(x) ln(P(x)/Q(x)) in nats after both sides are smoothed by eps
// and renormalized.
double klDivergence(const Histogram& P, const Histogram& Q,
                    double eps = kSmoothingEps);

// (KL(P||M) + KL(Q||M))/2 with M = (P+Q)/2, no extra smoothing. Bounded
// by ln 2. `squareRoot` returns the metric version.
double jsDistance(const Histogram& P, const Histogram& Q, bool squareRoot = false);

struct TransportPlan {
  std::vector<double> plan;  // d x d row-major, rounded onto U(r, c)
  double value = 0;          // <P, M> of the rounded plan
  double dualBound = 0;      // feasible-dual lower bound on the exact OT cost
  double marginalViolation = 0;
  int iterations = 0;
  bool converged = false;
  bool usedLogDomain = false;
};

// Alternating row/column scaling of K = exp(-lambdaReg * M) until the
// worst marginal violation of the scaled plan falls below tol. Underflow
// of the kernel switches to log-domain updates. r and c must be strictly
// positive and sum to one.
TransportPlan sinkhorn(const std::vector<double>& r, const std::vector<double>& c,
                       const CostMatrix& M, double lambdaReg, double tol = 1e-9,
                       int maxIter = 10000);

// Log-domain variant, exposed for cross-checks.
TransportPlan sinkhornLog(const std::vector<double>& r, const std::vector<double>& c,
                          const CostMatrix& M, double lambdaReg, double tol = 1e-9,
                          int maxIter = 10000);

// Exact optimal transport cost by successive shortest paths on the
// complete bipartite graph. Test-scale oracle: refuses d > 64.
double exactOT(const std::vector<double>& r, const std::vector<double>& c,
               const CostMatrix& M);

// Tensorized Sinkhorn between two histograms on the same grid with the
// squared-Euclidean ground cost; the Gibbs kernel factorizes per axis.
struct GridTransport {
  double value = 0;
  double dualBound = 0;
  double marginalViolation = 0;
  int iterations = 0;
  bool converged = false;
};

// Holds the per-axis kernels for one (geometry, lambda) pair so sweeps
// that evaluate many histogram pairs build them once.
class GridSinkhorn {
 public:
  GridSinkhorn(const Histogram& geometry, double lambdaReg);
  GridTransport run(const Histogram& P, const Histogram& Q, double tol = 1e-9,
                    int maxIter = 10000, double eps = kSmoothingEps) const;
  double lambda() const { return lambda_; }

 private:
  Histogram geom_;
  double lambda_;
  std::array<std::vector<double>, 3> K_, KM_, sqCost_;
};

GridTransport sinkhornGrid(const Histogram& P, const Histogram& Q, double lambdaReg,
                           double tol = 1e-9, int maxIter = 10000,
                           double eps = kSmoothingEps);

// Median of the positive pairwise bin-center costs, computed from the
// per-axis displacement multiplicities.
double medianPositiveCost(const Histogram& geometry, int exponent = 2);

// Default regularization strength for the grid solvers.
double defaultLambda(const Histogram& geometry);

struct WassersteinResult {
  double distance = 0;   // sqrt of the quadratic transport cost
  double lowerBound = 0; // sqrt of the dual bound (= distance when exact)
  bool exact = false;
};

// Quadratic Wasserstein distance: exact solver for d <= 64 bins, else
// Sinkhorn at lambda = 200 / median(positive costs).
WassersteinResult wasserstein(const Histogram& P, const Histogram& Q);

} // namespace ybm
