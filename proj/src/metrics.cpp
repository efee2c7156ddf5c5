#include "ybm/metrics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace ybm {

namespace {

std::vector<double> autocovarianceDirect(const std::vector<double>& x, int maxLag) {
  const std::size_t n = x.size();
  std::vector<double> cov(static_cast<std::size_t>(maxLag) + 1, 0.0);
  for (int lag = 0; lag <= maxLag; ++lag) {
    double s = 0;
    for (std::size_t t = 0; t + lag < n; ++t) s += x[t] * x[t + lag];
    cov[lag] = s / static_cast<double>(n);
  }
  return cov;
}

std::vector<double> autocovarianceFft(const std::vector<double>& x, int maxLag) {
  const std::size_t n = x.size();
  std::size_t len = 1;
  while (len < n + static_cast<std::size_t>(maxLag) + 1) len <<= 1;
  std::vector<double> buf(len, 0.0);
  std::copy(x.begin(), x.end(), buf.begin());
  std::vector<fftw_complex> freq(len / 2 + 1);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(len), buf.data(), freq.data(),
                                       FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  for (auto& z : freq) {
    z[0] = z[0] * z[0] + z[1] * z[1];
    z[1] = 0;
  }
  fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(len), freq.data(), buf.data(),
                                       FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  std::vector<double> cov(static_cast<std::size_t>(maxLag) + 1);
  const double norm = 1.0 / (static_cast<double>(len) * static_cast<double>(n));
  for (int lag = 0; lag <= maxLag; ++lag) cov[lag] = buf[lag] * norm;
  return cov;
}

} // namespace

std::vector<double> autocorrelation(const std::vector<double>& x, int maxLag) {
  if (maxLag < 1) throw std::domain_error("autocorrelation: maxLag must be >= 1");
  if (x.size() < static_cast<std::size_t>(maxLag) + 2)
    throw std::domain_error("autocorrelation: series shorter than maxLag");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  std::vector<double> centered(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) centered[i] = x[i] - mean;

  const double work = static_cast<double>(x.size()) * maxLag;
  std::vector<double> cov = work > 2e7 ? autocovarianceFft(centered, maxLag)
                                       : autocovarianceDirect(centered, maxLag);
  if (!(cov[0] > 0)) throw std::domain_error("autocorrelation: constant series");
  std::vector<double> acf(cov.size());
  for (std::size_t i = 0; i < cov.size(); ++i) acf[i] = cov[i] / cov[0];
  return acf;
}

FirstZero firstZero(const std::vector<double>& acf, double threshold) {
  for (std::size_t lag = 1; lag < acf.size(); ++lag) {
    if (acf[lag] <= 0.0 || (acf[lag] > 0) != (acf[lag - 1] > 0)) {
      FirstZero z;
      z.lag = static_cast<int>(lag);
      z.acfValue = acf[lag];
      z.flagged = std::abs(acf[lag]) >= threshold;
      return z;
    }
  }
  throw NoDecorrelation("autocorrelation never crosses zero within maxLag");
}

std::vector<int> signReturns(const std::vector<double>& series, int stride) {
  if (stride < 1) throw std::domain_error("signReturns: stride must be >= 1");
  std::vector<int> signs;
  for (std::size_t i = 0; i + stride < series.size(); i += stride) {
    const double a = series[i];
    const double b = series[i + stride];
    if (a <= 0.0 || b <= 0.0)
      throw std::domain_error("signReturns: series must be strictly positive at sample points");
    const double ret = std::log10(b / a);
    signs.push_back(ret < 0 ? -1 : +1);
  }
  return signs;
}

double combinatorialEntropy(const std::vector<int>& signs, int K) {
  if (K < 1 || K > 20) throw std::domain_error("combinatorialEntropy: K out of range");
  const std::size_t n = signs.size();
  if (n < static_cast<std::size_t>(K))
    throw std::domain_error("combinatorialEntropy: fewer signs than K");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(1) << K, 0);
  const std::uint32_t mask = (1u << K) - 1u;
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < n; ++i) {
    code = ((code << 1) | (signs[i] > 0 ? 1u : 0u)) & mask;
    if (i + 1 >= static_cast<std::size_t>(K)) ++counts[code];
  }
  const double total = static_cast<double>(n - K + 1);
  double h = 0;
  for (const std::int64_t cnt : counts)
    if (cnt > 0) {
      const double p = static_cast<double>(cnt) / total;
      h -= p * std::log2(p);
    }
  return h;
}

RobustFit huberLine(const std::vector<double>& x, const std::vector<double>& y,
                    double tuning, int maxIter, double rtol) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::domain_error("huberLine: need >= 2 points");
  const std::size_t n = x.size();
  std::vector<double> w(n, 1.0), res(n, 0.0);
  RobustFit fit;
  double prevSlope = std::numeric_limits<double>::infinity();
  for (int it = 0; it < maxIter; ++it) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sw += w[i];
      sx += w[i] * x[i];
      sy += w[i] * y[i];
      sxx += w[i] * x[i] * x[i];
      sxy += w[i] * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (det == 0) throw std::domain_error("huberLine: degenerate abscissae");
    fit.slope = (sw * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / sw;
    fit.iterations = it + 1;
    for (std::size_t i = 0; i < n; ++i)
      res[i] = y[i] - (fit.intercept + fit.slope * x[i]);

    // robust scale: median absolute residual / 0.6745
    std::vector<double> absRes(n);
    for (std::size_t i = 0; i < n; ++i) absRes[i] = std::abs(res[i]);
    std::nth_element(absRes.begin(), absRes.begin() + n / 2, absRes.end());
    const double mad = absRes[n / 2];
    const double scale = mad / 0.6745;
    if (scale <= 0) break; // perfect fit on at least half the points
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(res[i]) / scale;
      w[i] = a <= tuning ? 1.0 : tuning / a;
    }
    if (std::abs(fit.slope - prevSlope) <=
        rtol * std::max(1.0, std::abs(fit.slope)))
      break;
    prevSlope = fit.slope;
  }
  fit.residuals = res;
  return fit;
}

EntropyReport entropyReport(const std::vector<double>& series, double sampleSpacing,
                            double maxLagYears, double acfThreshold) {
  if (!(sampleSpacing > 0)) throw std::domain_error("entropyReport: bad sample spacing");
  int maxLag = static_cast<int>(std::floor(maxLagYears / sampleSpacing + 1e-9));
  maxLag = std::min<int>(maxLag, static_cast<int>(series.size()) / 2);
  if (maxLag < 1) throw std::domain_error("entropyReport: series too short");

  EntropyReport rep;
  const auto acf = autocorrelation(series, maxLag);
  const FirstZero z = firstZero(acf, acfThreshold);
  rep.tauStarSamples = z.lag;
  rep.tauStarYears = z.lag * sampleSpacing;
  rep.acfAtTauStar = z.acfValue;
  rep.acfFlagged = z.flagged;

  const auto signs = signReturns(series, z.lag);
  std::vector<double> ks;
  for (int K = 1; K <= 12; ++K) {
    rep.HK.push_back(combinatorialEntropy(signs, K));
    ks.push_back(static_cast<double>(K));
  }
  rep.fit = huberLine(ks, rep.HK);
  rep.slope = rep.fit.slope;
  return rep;
}

BoxCountReport boxCount(const std::vector<std::array<double, 3>>& pts,
                        const std::vector<double>& epsilons) {
  if (pts.empty()) throw std::domain_error("boxCount: empty point cloud");
  if (epsilons.empty()) throw std::domain_error("boxCount: no box sizes");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1]))
      throw std::domain_error("boxCount: epsilons must be positive decreasing");

  BoxCountReport rep;
  rep.epsilons = epsilons;
  std::unordered_set<std::uint64_t> occupied;
  for (const double eps : epsilons) {
    if (!(eps > 0)) throw std::domain_error("boxCount: epsilons must be positive");
    occupied.clear();
    occupied.reserve(pts.size());
    for (const auto& p : pts) {
      std::uint64_t key = 0;
      for (int a = 0; a < 3; ++a) {
        const auto cell = static_cast<std::int64_t>(std::floor(p[a] / eps));
        key = key * 0x100000001B3ULL + static_cast<std::uint64_t>(cell + (1ll << 40));
      }
      occupied.insert(key);
    }
    rep.counts.push_back(static_cast<std::int64_t>(occupied.size()));
  }

  const auto n = static_cast<std::int64_t>(pts.size());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (rep.counts[i] >= n || rep.counts[i] < 10) continue;
    rep.fitRange.push_back(static_cast<int>(i));
    lx.push_back(std::log(epsilons[i]));
    ly.push_back(std::log(static_cast<double>(rep.counts[i])));
  }
  if (lx.size() >= 2) {
    rep.dimension = -huberLine(lx, ly).slope;
  } else if (rep.counts.front() == 1 && rep.counts.back() == 1) {
    rep.dimension = 0.0; // single occupied box at every scale
  } else {
    rep.dimension = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

std::vector<double> defaultEpsilons(const std::vector<std::array<double, 3>>& pts,
                                    int jmin, int jmax) {
  if (pts.empty()) throw std::domain_error("defaultEpsilons: empty point cloud");
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& p : pts)
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  double diam2 = 0;
  for (int a = 0; a < 3; ++a) diam2 += (hi[a] - lo[a]) * (hi[a] - lo[a]);
  const double diam = std::sqrt(diam2);
  if (!(diam > 0)) throw std::domain_error("defaultEpsilons: degenerate cloud");
  std::vector<double> eps;
  for (int j = jmin; j <= jmax; ++j) eps.push_back(diam * std::pow(2.0, -j));
  return eps;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::domain_error("spearman: need two equally sized samples");
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) throw std::domain_error("spearman: constant ranks");
  return sab / std::sqrt(saa * sbb);
}

} // namespace ybm
