#include "ybm/histogram.hpp"

#include <cmath>
#include <stdexcept>

namespace ybm {

bool Histogram::sameGeometry(const Histogram& o) const {
  if (dims != o.dims) return false;
  for (int a = 0; a < dims; ++a)
    if (shape[a] != o.shape[a] || lo[a] != o.lo[a] || hi[a] != o.hi[a]) return false;
  return true;
}

namespace {

struct Binner {
  double lo, hi;
  int n;
  bool clip = false;
  int operator()(double x) {
    int i = static_cast<int>(std::floor((x - lo) / (hi - lo) * n));
    if (i < 0) {
      i = 0;
      clip = true;
    } else if (i >= n) {
      // the upper bound itself belongs to the last bin
      if (x > hi) clip = true;
      i = n - 1;
    }
    return i;
  }
};

void checkGrid(int nbins, double lo, double hi) {
  if (nbins < 2) throw std::domain_error("histogram: need at least 2 bins per axis");
  if (!(hi > lo)) throw std::domain_error("histogram: need hi > lo");
}

void normalize(Histogram& h, std::size_t npts) {
  if (npts == 0) throw std::domain_error("histogram: empty point set");
  const double inv = 1.0 / static_cast<double>(npts);
  for (double& x : h.w) x *= inv;
}

} // namespace

Histogram buildHistogram1D(const std::vector<double>& xs, int nbins, double lo,
                           double hi) {
  checkGrid(nbins, lo, hi);
  Histogram h;
  h.dims = 1;
  h.shape = {nbins, 1, 1};
  h.lo = {lo, 0, 0};
  h.hi = {hi, 1, 1};
  h.w.assign(static_cast<std::size_t>(nbins), 0.0);
  Binner bx{lo, hi, nbins};
  for (double x : xs) {
    bx.clip = false;
    h.w[static_cast<std::size_t>(bx(x))] += 1.0;
    if (bx.clip) ++h.clipped;
  }
  normalize(h, xs.size());
  return h;
}

Histogram buildHistogram2D(const std::vector<std::array<double, 2>>& pts, int ng,
                           std::array<double, 2> lo, std::array<double, 2> hi) {
  checkGrid(ng, lo[0], hi[0]);
  checkGrid(ng, lo[1], hi[1]);
  Histogram h;
  h.dims = 2;
  h.shape = {ng, ng, 1};
  h.lo = {lo[0], lo[1], 0};
  h.hi = {hi[0], hi[1], 1};
  h.w.assign(static_cast<std::size_t>(ng) * ng, 0.0);
  Binner bx{lo[0], hi[0], ng}, by{lo[1], hi[1], ng};
  for (const auto& p : pts) {
    bx.clip = by.clip = false;
    const int ix = bx(p[0]), iy = by(p[1]);
    h.w[static_cast<std::size_t>(ix) * ng + iy] += 1.0;
    if (bx.clip || by.clip) ++h.clipped;
  }
  normalize(h, pts.size());
  return h;
}

Histogram buildHistogram3D(const std::vector<std::array<double, 3>>& pts, int ng,
                           std::array<double, 3> lo, std::array<double, 3> hi) {
  for (int a = 0; a < 3; ++a) checkGrid(ng, lo[a], hi[a]);
  Histogram h;
  h.dims = 3;
  h.shape = {ng, ng, ng};
  h.lo = lo;
  h.hi = hi;
  h.w.assign(static_cast<std::size_t>(ng) * ng * ng, 0.0);
  Binner bx{lo[0], hi[0], ng}, by{lo[1], hi[1], ng}, bz{lo[2], hi[2], ng};
  for (const auto& p : pts) {
    bx.clip = by.clip = bz.clip = false;
    const int ix = bx(p[0]), iy = by(p[1]), iz = bz(p[2]);
    h.w[(static_cast<std::size_t>(ix) * ng + iy) * ng + iz] += 1.0;
    if (bx.clip || by.clip || bz.clip) ++h.clipped;
  }
  normalize(h, pts.size());
  return h;
}

std::vector<double> smoothed(const std::vector<double>& w, double eps) {
  if (!(eps >= 0)) throw std::domain_error("smoothed: eps must be >= 0");
  std::vector<double> out(w.size());
  double total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = w[i] + eps;
    total += out[i];
  }
  if (!(total > 0)) throw std::domain_error("smoothed: zero total mass");
  for (double& x : out) x /= total;
  return out;
}

} // namespace ybm
