#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ybm {

// Normalized density over a regular 1-, 2- or 3-axis grid, stored flat
// with the last axis fastest. Points on an upper bound fall in the last
// bin; points outside the bounds are clipped into the edge bin and
// counted in `clipped`.
struct Histogram {
  int dims = 3;
  std::array<int, 3> shape{1, 1, 1};
  std::array<double, 3> lo{0, 0, 0};
  std::array<double, 3> hi{1, 1, 1};
  std::vector<double> w;
  std::int64_t clipped = 0;

  int size() const {
    int n = 1;
    for (int a = 0; a < dims; ++a) n *= shape[a];
    return n;
  }
  double binWidth(int axis) const { return (hi[axis] - lo[axis]) / shape[axis]; }
  double center(int axis, int i) const {
    return lo[axis] + (i + 0.5) * binWidth(axis);
  }
  bool sameGeometry(const Histogram& o) const;
};

Histogram buildHistogram1D(const std::vector<double>& xs, int nbins, double lo,
                           double hi);
Histogram buildHistogram2D(const std::vector<std::array<double, 2>>& pts, int ng,
                           std::array<double, 2> lo, std::array<double, 2> hi);
Histogram buildHistogram3D(const std::vector<std::array<double, 3>>& pts, int ng,
                           std::array<double, 3> lo, std::array<double, 3> hi);

// Adds eps to every bin and renormalizes to total mass 1.
std::vector<double> smoothed(const std::vector<double>& w, double eps);

} // namespace ybm
