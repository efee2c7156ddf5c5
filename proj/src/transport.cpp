#include "ybm/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ybm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::array<int, 3> unflatten(const Histogram& g, int flat) {
  std::array<int, 3> idx{0, 0, 0};
  int rem = flat;
  for (int a = g.dims - 1; a >= 0; --a) {
    idx[a] = rem % g.shape[a];
    rem /= g.shape[a];
  }
  return idx;
}

void checkPair(const std::vector<double>& r, const std::vector<double>& c,
               const CostMatrix& M) {
  if (static_cast<int>(r.size()) != M.d || static_cast<int>(c.size()) != M.d)
    throw std::invalid_argument("transport: histogram/cost size mismatch");
  const double sr = std::accumulate(r.begin(), r.end(), 0.0);
  const double sc = std::accumulate(c.begin(), c.end(), 0.0);
  if (std::abs(sr - sc) > 1e-6)
    throw std::invalid_argument("transport: marginals must carry equal mass");
}

// Scales the plan onto U(r, c): row and column shrink factors capped at 1,
// then the residual mass added back as a rank-one correction.
void roundToPolytope(std::vector<double>& plan, const std::vector<double>& r,
                     const std::vector<double>& c) {
  const int d = static_cast<int>(r.size());
  std::vector<double> rowSum(d, 0.0), colSum(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rowSum[i] += plan[static_cast<std::size_t>(i) * d + j];
  for (int i = 0; i < d; ++i) {
    const double a = rowSum[i] > r[i] ? r[i] / rowSum[i] : 1.0;
    for (int j = 0; j < d; ++j) plan[static_cast<std::size_t>(i) * d + j] *= a;
  }
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) colSum[j] += plan[static_cast<std::size_t>(i) * d + j];
  for (int j = 0; j < d; ++j) {
    const double b = colSum[j] > c[j] ? c[j] / colSum[j] : 1.0;
    if (b != 1.0)
      for (int i = 0; i < d; ++i) plan[static_cast<std::size_t>(i) * d + j] *= b;
  }
  std::fill(rowSum.begin(), rowSum.end(), 0.0);
  std::fill(colSum.begin(), colSum.end(), 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double x = plan[static_cast<std::size_t>(i) * d + j];
      rowSum[i] += x;
      colSum[j] += x;
    }
  double missing = 0;
  std::vector<double> errR(d), errC(d);
  for (int i = 0; i < d; ++i) {
    errR[i] = std::max(0.0, r[i] - rowSum[i]);
    errC[i] = std::max(0.0, c[i] - colSum[i]);
    missing += errR[i];
  }
  if (missing > 0) {
    const double ecTotal = std::accumulate(errC.begin(), errC.end(), 0.0);
    if (ecTotal > 0)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          plan[static_cast<std::size_t>(i) * d + j] += errR[i] * errC[j] / ecTotal;
  }
}

double planCost(const std::vector<double>& plan, const CostMatrix& M) {
  double v = 0;
  for (std::size_t i = 0; i < plan.size(); ++i) v += plan[i] * M.m[i];
  return v;
}

// Feasible-dual value: alpha_i = min_j (M_ij - g_j) pairs with g to give a
// lower bound on the unregularized optimum for any g.
double feasibleDualValue(const std::vector<double>& g, const std::vector<double>& r,
                         const std::vector<double>& c, const CostMatrix& M) {
  const int d = M.d;
  double bound = 0;
  for (int i = 0; i < d; ++i) {
    double best = kInf;
    for (int j = 0; j < d; ++j) best = std::min(best, M.at(i, j) - g[j]);
    bound += best * r[i];
  }
  for (int j = 0; j < d; ++j) bound += g[j] * c[j];
  return bound;
}

double maxMarginalViolation(const std::vector<double>& plan,
                            const std::vector<double>& r,
                            const std::vector<double>& c) {
  const int d = static_cast<int>(r.size());
  double worst = 0;
  for (int i = 0; i < d; ++i) {
    double s = 0;
    for (int j = 0; j < d; ++j) s += plan[static_cast<std::size_t>(i) * d + j];
    worst = std::max(worst, std::abs(s - r[i]));
  }
  for (int j = 0; j < d; ++j) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += plan[static_cast<std::size_t>(i) * d + j];
    worst = std::max(worst, std::abs(s - c[j]));
  }
  return worst;
}

} // namespace

CostMatrix costMatrix(const Histogram& g, int exponent) {
  if (exponent != 1 && exponent != 2)
    throw std::domain_error("costMatrix: exponent must be 1 or 2");
  const int d = g.size();
  std::vector<std::array<double, 3>> centers(static_cast<std::size_t>(d), {0, 0, 0});
  for (int f = 0; f < d; ++f) {
    const auto idx = unflatten(g, f);
    for (int a = 0; a < g.dims; ++a) centers[f][a] = g.center(a, idx[a]);
  }
  CostMatrix M;
  M.d = d;
  M.m.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double s = 0;
      for (int a = 0; a < g.dims; ++a) {
        const double diff = centers[i][a] - centers[j][a];
        s += diff * diff;
      }
      const double cost = exponent == 2 ? s : std::sqrt(s);
      M.m[static_cast<std::size_t>(i) * d + j] = cost;
      M.m[static_cast<std::size_t>(j) * d + i] = cost;
    }
  return M;
}

double klDivergence(const Histogram& P, const Histogram& Q, double eps) {
  if (!P.sameGeometry(Q))
    throw std::invalid_argument("klDivergence: mismatched histogram geometry");
  const auto p = smoothed(P.w, eps);
  const auto q = smoothed(Q.w, eps);
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0) s += p[i] * std::log(p[i] / q[i]);
  return s;
}

double jsDistance(const Histogram& P, const Histogram& Q, bool squareRoot) {
  if (!P.sameGeometry(Q))
    throw std::invalid_argument("jsDistance: mismatched histogram geometry");
  double s = 0;
  for (std::size_t i = 0; i < P.w.size(); ++i) {
    const double p = P.w[i], q = Q.w[i];
    const double m = 0.5 * (p + q);
    if (p > 0) s += 0.5 * p * std::log(p / m);
    if (q > 0) s += 0.5 * q * std::log(q / m);
  }
  s = std::max(s, 0.0);
  return squareRoot ? std::sqrt(s) : s;
}

TransportPlan sinkhorn(const std::vector<double>& r, const std::vector<double>& c,
                       const CostMatrix& M, double lambdaReg, double tol,
                       int maxIter) {
  checkPair(r, c, M);
  if (!(lambdaReg > 0)) throw std::domain_error("sinkhorn: lambdaReg must be > 0");
  const int d = M.d;
  if (d > 4096) throw std::invalid_argument("sinkhorn: dense path capped at 4096 bins");
  for (int i = 0; i < d; ++i)
    if (!(r[i] > 0) || !(c[i] > 0))
      throw std::domain_error("sinkhorn: marginals must be strictly positive");

  std::vector<double> K(static_cast<std::size_t>(d) * d);
  for (std::size_t i = 0; i < K.size(); ++i) K[i] = std::exp(-lambdaReg * M.m[i]);

  std::vector<double> u(d, 1.0), v(d, 1.0), kv(d), ktu(d);
  auto matvec = [&](const std::vector<double>& x, std::vector<double>& y, bool transpose) {
    for (int i = 0; i < d; ++i) {
      double s = 0;
      if (transpose)
        for (int j = 0; j < d; ++j) s += K[static_cast<std::size_t>(j) * d + i] * x[j];
      else
        for (int j = 0; j < d; ++j) s += K[static_cast<std::size_t>(i) * d + j] * x[j];
      y[i] = s;
    }
  };

  TransportPlan out;
  bool breakdown = false;
  int iter = 0;
  double violation = kInf;
  for (; iter < maxIter; ++iter) {
    matvec(v, kv, false);
    for (int i = 0; i < d; ++i) {
      if (!(kv[i] > 0) || !std::isfinite(kv[i])) {
        breakdown = true;
        break;
      }
      u[i] = r[i] / kv[i];
    }
    if (breakdown) break;
    matvec(u, ktu, true);
    for (int j = 0; j < d; ++j) {
      if (!(ktu[j] > 0) || !std::isfinite(ktu[j])) {
        breakdown = true;
        break;
      }
      v[j] = c[j] / ktu[j];
    }
    if (breakdown) break;
    if (iter % 10 == 9 || iter == maxIter - 1) {
      matvec(v, kv, false);
      violation = 0;
      for (int i = 0; i < d; ++i) violation = std::max(violation, std::abs(u[i] * kv[i] - r[i]));
      if (violation < tol) {
        ++iter;
        break;
      }
    }
  }
  if (breakdown) return sinkhornLog(r, c, M, lambdaReg, tol, maxIter);

  out.iterations = iter;
  out.plan.resize(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.plan[static_cast<std::size_t>(i) * d + j] =
          u[i] * K[static_cast<std::size_t>(i) * d + j] * v[j];
  roundToPolytope(out.plan, r, c);
  out.value = planCost(out.plan, M);
  out.marginalViolation = maxMarginalViolation(out.plan, r, c);
  out.converged = violation < tol;

  std::vector<double> g(d);
  bool gOk = true;
  for (int j = 0; j < d; ++j) {
    g[j] = std::log(v[j]) / lambdaReg;
    if (!std::isfinite(g[j])) gOk = false;
  }
  if (!gOk) std::fill(g.begin(), g.end(), 0.0);
  out.dualBound = feasibleDualValue(g, r, c, M);
  return out;
}

TransportPlan sinkhornLog(const std::vector<double>& r, const std::vector<double>& c,
                          const CostMatrix& M, double lambdaReg, double tol,
                          int maxIter) {
  checkPair(r, c, M);
  const int d = M.d;
  if (d > 4096) throw std::invalid_argument("sinkhornLog: dense path capped at 4096 bins");
  const double tau = 1.0 / lambdaReg;
  std::vector<double> f(d, 0.0), g(d, 0.0), logR(d), logC(d), work(d);
  for (int i = 0; i < d; ++i) {
    logR[i] = std::log(r[i]);
    logC[i] = std::log(c[i]);
  }
  auto lse = [&](auto term) {
    double m = -kInf;
    for (int j = 0; j < d; ++j) {
      work[j] = term(j);
      m = std::max(m, work[j]);
    }
    if (m == -kInf) return -kInf;
    double s = 0;
    for (int j = 0; j < d; ++j) s += std::exp(work[j] - m);
    return m + std::log(s);
  };

  int iter = 0;
  double violation = kInf;
  for (; iter < maxIter; ++iter) {
    for (int i = 0; i < d; ++i)
      f[i] = tau * logR[i] -
             tau * lse([&](int j) { return (g[j] - M.at(i, j)) / tau; });
    for (int j = 0; j < d; ++j)
      g[j] = tau * logC[j] -
             tau * lse([&](int i) { return (f[i] - M.at(i, j)) / tau; });
    if (iter % 10 == 9 || iter == maxIter - 1) {
      violation = 0;
      for (int i = 0; i < d; ++i) {
        const double row = std::exp(
            f[i] / tau + lse([&](int j) { return (g[j] - M.at(i, j)) / tau; }));
        violation = std::max(violation, std::abs(row - r[i]));
      }
      if (violation < tol) {
        ++iter;
        break;
      }
    }
  }

  TransportPlan out;
  out.usedLogDomain = true;
  out.iterations = iter;
  out.converged = violation < tol;
  out.plan.resize(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.plan[static_cast<std::size_t>(i) * d + j] =
          std::exp((f[i] + g[j] - M.at(i, j)) / tau);
  roundToPolytope(out.plan, r, c);
  out.value = planCost(out.plan, M);
  out.marginalViolation = maxMarginalViolation(out.plan, r, c);
  out.dualBound = feasibleDualValue(g, r, c, M);
  return out;
}

double exactOT(const std::vector<double>& r, const std::vector<double>& c,
               const CostMatrix& M) {
  checkPair(r, c, M);
  const int d = M.d;
  if (d > 64) throw std::invalid_argument("exactOT: oracle capped at 64 bins");

  // Successive shortest augmenting paths with Johnson potentials on the
  // complete bipartite graph; every augmentation exhausts a supply or a
  // demand (or a reverse arc), and capacities are real-valued.
  std::vector<double> supply = r, demand = c;
  const double scale = std::accumulate(r.begin(), r.end(), 0.0) /
                       std::accumulate(c.begin(), c.end(), 0.0);
  for (double& x : demand) x *= scale;

  const int nNodes = 2 * d;
  std::vector<double> flow(static_cast<std::size_t>(d) * d, 0.0);
  std::vector<double> pot(nNodes, 0.0), dist(nNodes);
  std::vector<int> parent(nNodes);
  std::vector<char> done(nNodes);
  const double tiny = 1e-15;

  auto remainingSupply = [&] {
    return std::accumulate(supply.begin(), supply.end(), 0.0);
  };

  while (remainingSupply() > 1e-13) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (int i = 0; i < d; ++i)
      if (supply[i] > tiny) dist[i] = 0;

    for (;;) {
      int best = -1;
      double bd = kInf;
      for (int x = 0; x < nNodes; ++x)
        if (!done[x] && dist[x] < bd) {
          bd = dist[x];
          best = x;
        }
      if (best < 0) break;
      done[best] = 1;
      if (best < d) {
        const int i = best;
        for (int j = 0; j < d; ++j) {
          const double rc = M.at(i, j) + pot[i] - pot[d + j];
          if (dist[i] + rc < dist[d + j] - 1e-18) {
            dist[d + j] = dist[i] + rc;
            parent[d + j] = i;
          }
        }
      } else {
        const int j = best - d;
        for (int i = 0; i < d; ++i)
          if (flow[static_cast<std::size_t>(i) * d + j] > tiny) {
            const double rc = -M.at(i, j) + pot[d + j] - pot[i];
            if (dist[d + j] + rc < dist[i] - 1e-18) {
              dist[i] = dist[d + j] + rc;
              parent[i] = d + j;
            }
          }
      }
    }

    int target = -1;
    double bd = kInf;
    for (int j = 0; j < d; ++j)
      if (demand[j] > tiny && dist[d + j] < bd) {
        bd = dist[d + j];
        target = d + j;
      }
    if (target < 0)
      throw std::runtime_error("exactOT: no augmenting path (mass mismatch)");

    // Bottleneck along the path: terminal supply/demand and reverse arcs.
    double delta = demand[target - d];
    int x = target;
    while (parent[x] >= 0) {
      const int px = parent[x];
      if (px >= d) // reverse arc (sink px-d) -> (source x)
        delta = std::min(delta, flow[static_cast<std::size_t>(x) * d + (px - d)]);
      x = px;
    }
    delta = std::min(delta, supply[x]);

    int y = target;
    while (parent[y] >= 0) {
      const int py = parent[y];
      if (py < d)
        flow[static_cast<std::size_t>(py) * d + (y - d)] += delta;
      else
        flow[static_cast<std::size_t>(y) * d + (py - d)] -= delta;
      y = py;
    }
    supply[x] -= delta;
    demand[target - d] -= delta;

    for (int z = 0; z < nNodes; ++z)
      if (dist[z] < kInf) pot[z] += dist[z];
  }

  double cost = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      cost += flow[static_cast<std::size_t>(i) * d + j] * M.at(i, j);
  return cost;
}

namespace {

// y = (K applied along `axis`) x for a flat tensor of the given shape.
void applyAxis(const std::vector<double>& x, std::vector<double>& y,
               const std::array<int, 3>& shape, int dims, int axis,
               const std::vector<double>& K) {
  const int n = shape[axis];
  int inner = 1, outer = 1;
  for (int a = axis + 1; a < dims; ++a) inner *= shape[a];
  for (int a = 0; a < axis; ++a) outer *= shape[a];
  const std::size_t stride = static_cast<std::size_t>(inner);
  for (int o = 0; o < outer; ++o) {
    const std::size_t base = static_cast<std::size_t>(o) * n * inner;
    for (int k = 0; k < n; ++k) {
      const double* kr = K.data() + static_cast<std::size_t>(k) * n;
      double* yr = y.data() + base + static_cast<std::size_t>(k) * stride;
      std::fill(yr, yr + inner, 0.0);
      for (int j = 0; j < n; ++j) {
        const double kj = kr[j];
        if (kj == 0.0) continue;
        const double* xr = x.data() + base + static_cast<std::size_t>(j) * stride;
        for (int t = 0; t < inner; ++t) yr[t] += kj * xr[t];
      }
    }
  }
}

// Min-plus contraction along `axis`: y[i,...] = min_j (cost(i,j) + x[j,...]).
void minPlusAxis(const std::vector<double>& x, std::vector<double>& y,
                 const std::array<int, 3>& shape, int dims, int axis,
                 const std::vector<double>& sqCost) {
  const int n = shape[axis];
  int inner = 1, outer = 1;
  for (int a = axis + 1; a < dims; ++a) inner *= shape[a];
  for (int a = 0; a < axis; ++a) outer *= shape[a];
  for (int o = 0; o < outer; ++o) {
    const std::size_t base = static_cast<std::size_t>(o) * n * inner;
    for (int k = 0; k < n; ++k) {
      double* yr = y.data() + base + static_cast<std::size_t>(k) * inner;
      std::fill(yr, yr + inner, kInf);
      for (int j = 0; j < n; ++j) {
        const double cst = sqCost[static_cast<std::size_t>(k) * n + j];
        const double* xr = x.data() + base + static_cast<std::size_t>(j) * inner;
        for (int t = 0; t < inner; ++t) yr[t] = std::min(yr[t], cst + xr[t]);
      }
    }
  }
}

} // namespace

GridSinkhorn::GridSinkhorn(const Histogram& geometry, double lambdaReg)
    : geom_(geometry), lambda_(lambdaReg) {
  if (!(lambdaReg > 0)) throw std::domain_error("GridSinkhorn: lambdaReg must be > 0");
  for (int a = 0; a < geom_.dims; ++a) {
    const int n = geom_.shape[a];
    const double dx = geom_.binWidth(a);
    K_[a].resize(static_cast<std::size_t>(n) * n);
    KM_[a].resize(K_[a].size());
    sqCost_[a].resize(K_[a].size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double diff = dx * (i - j);
        const double m = diff * diff;
        const double k = std::exp(-lambdaReg * m);
        K_[a][static_cast<std::size_t>(i) * n + j] = k;
        KM_[a][static_cast<std::size_t>(i) * n + j] = k * m;
        sqCost_[a][static_cast<std::size_t>(i) * n + j] = m;
      }
  }
}

GridTransport GridSinkhorn::run(const Histogram& P, const Histogram& Q, double tol,
                                int maxIter, double eps) const {
  if (!P.sameGeometry(geom_) || !Q.sameGeometry(geom_))
    throw std::invalid_argument("GridSinkhorn: mismatched histogram geometry");
  const int dims = geom_.dims;
  const auto r = smoothed(P.w, eps);
  const auto c = smoothed(Q.w, eps);
  const std::size_t d = r.size();

  std::vector<double> u(d, 1.0), v(d, 1.0), t1(d), t2(d);
  auto applyKernel = [&](const std::vector<double>& x, std::vector<double>& out,
                         int mAxis) {
    const std::vector<double>* cur = &x;
    std::vector<double>* nxt = &t1;
    for (int a = 0; a < dims; ++a) {
      applyAxis(*cur, *nxt, geom_.shape, dims, a, a == mAxis ? KM_[a] : K_[a]);
      cur = nxt;
      nxt = (nxt == &t1) ? &t2 : &t1;
    }
    if (cur != &out) out = *cur;
  };

  GridTransport res;
  std::vector<double> kv(d);
  int iter = 0;
  double violation = kInf;
  for (; iter < maxIter; ++iter) {
    applyKernel(v, kv, -1);
    for (std::size_t i = 0; i < d; ++i) {
      if (!(kv[i] > 0) || !std::isfinite(kv[i]))
        throw std::runtime_error("GridSinkhorn: kernel breakdown (lower lambda)");
      u[i] = r[i] / kv[i];
    }
    applyKernel(u, kv, -1);
    for (std::size_t j = 0; j < d; ++j) {
      if (!(kv[j] > 0) || !std::isfinite(kv[j]))
        throw std::runtime_error("GridSinkhorn: kernel breakdown (lower lambda)");
      v[j] = c[j] / kv[j];
    }
    if (iter % 10 == 9 || iter == maxIter - 1) {
      applyKernel(v, kv, -1);
      violation = 0;
      for (std::size_t i = 0; i < d; ++i)
        violation = std::max(violation, std::abs(u[i] * kv[i] - r[i]));
      if (violation < tol) {
        ++iter;
        break;
      }
    }
  }
  res.iterations = iter;
  res.converged = violation < tol;
  res.marginalViolation = violation;

  // <P, M> = sum over axes of the contraction with KM on that axis.
  double value = 0;
  for (int a = 0; a < dims; ++a) {
    applyKernel(v, kv, a);
    for (std::size_t i = 0; i < d; ++i) value += u[i] * kv[i];
  }
  res.value = value;

  std::vector<double> g(d);
  bool gOk = true;
  for (std::size_t j = 0; j < d; ++j) {
    g[j] = std::log(v[j]) / lambda_;
    if (!std::isfinite(g[j])) gOk = false;
  }
  if (!gOk) std::fill(g.begin(), g.end(), 0.0);
  // alpha_i = min_j (M_ij - g_j) via per-axis min-plus passes.
  std::vector<double> h(d), h2(d);
  for (std::size_t j = 0; j < d; ++j) h[j] = -g[j];
  for (int a = dims - 1; a >= 0; --a) {
    minPlusAxis(h, h2, geom_.shape, dims, a, sqCost_[a]);
    h.swap(h2);
  }
  double bound = 0;
  for (std::size_t i = 0; i < d; ++i) bound += h[i] * r[i];
  for (std::size_t j = 0; j < d; ++j) bound += g[j] * c[j];
  res.dualBound = bound;
  return res;
}

GridTransport sinkhornGrid(const Histogram& P, const Histogram& Q, double lambdaReg,
                           double tol, int maxIter, double eps) {
  if (!P.sameGeometry(Q))
    throw std::invalid_argument("sinkhornGrid: mismatched histogram geometry");
  return GridSinkhorn(P, lambdaReg).run(P, Q, tol, maxIter, eps);
}

double medianPositiveCost(const Histogram& g, int exponent) {
  const int dims = g.dims;
  std::vector<std::pair<double, double>> items; // (cost, multiplicity)
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> w{0, 0, 0};
  for (int a = 0; a < dims; ++a) {
    n[a] = g.shape[a];
    w[a] = g.binWidth(a);
  }
  for (int dx = 0; dx < n[0]; ++dx)
    for (int dy = 0; dy < n[1]; ++dy)
      for (int dz = 0; dz < n[2]; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        double s = dx * w[0] * dx * w[0];
        if (dims > 1) s += dy * w[1] * dy * w[1];
        if (dims > 2) s += dz * w[2] * dz * w[2];
        auto mult = [](int nn, int dd) {
          return dd == 0 ? static_cast<double>(nn) : 2.0 * (nn - dd);
        };
        double count = mult(n[0], dx);
        if (dims > 1) count *= mult(n[1], dy);
        if (dims > 2) count *= mult(n[2], dz);
        items.emplace_back(exponent == 2 ? s : std::sqrt(s), count);
      }
  std::sort(items.begin(), items.end());
  double total = 0;
  for (const auto& it : items) total += it.second;
  double cum = 0;
  for (const auto& it : items) {
    cum += it.second;
    if (cum >= 0.5 * total) return it.first;
  }
  return items.back().first;
}

double defaultLambda(const Histogram& geometry) {
  return 200.0 / medianPositiveCost(geometry, 2);
}

WassersteinResult wasserstein(const Histogram& P, const Histogram& Q) {
  if (!P.sameGeometry(Q))
    throw std::invalid_argument("wasserstein: mismatched histogram geometry");
  WassersteinResult res;
  if (P.size() <= 64) {
    const CostMatrix M = costMatrix(P, 2);
    const double v = exactOT(P.w, Q.w, M);
    res.distance = std::sqrt(std::max(v, 0.0));
    res.lowerBound = res.distance;
    res.exact = true;
    return res;
  }
  const GridTransport t = sinkhornGrid(P, Q, defaultLambda(P));
  res.distance = std::sqrt(std::max(t.value, 0.0));
  res.lowerBound = std::sqrt(std::max(t.dualBound, 0.0));
  res.exact = false;
  return res;
}

} // namespace ybm
