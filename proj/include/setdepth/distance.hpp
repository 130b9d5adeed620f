#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "setdepth/raster.hpp"

namespace setdepth {

/// Dense scalar field on a pixel grid, row-major.
struct ScalarField {
  int width = 0;
  int height = 0;
  double pixel_size = 1.0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  Grid grid() const { return Grid{width, height, pixel_size}; }
};

namespace detail {

constexpr std::int64_t kEdtInf = std::int64_t{1} << 50;

// One-dimensional squared distance transform (lower envelope of parabolas).
// f holds squared "seed" costs, kEdtInf for absent seeds; exact for integer
// grid positions.
inline void edt_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d, int n,
                   std::vector<int>& v, std::vector<double>& z) {
  int k = -1;
  v.resize(static_cast<std::size_t>(n) + 1);
  z.resize(static_cast<std::size_t>(n) + 1);
  for (int q = 0; q < n; ++q) {
    if (f[q] >= kEdtInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double s;
    for (;;) {
      const int p = v[k];
      s = (static_cast<double>(f[q] - f[p]) + static_cast<double>(q) * q -
           static_cast<double>(p) * p) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      if (--k < 0) break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) d[q] = kEdtInf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (j < k && z[j + 1] < q) ++j;
    const std::int64_t dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace detail

/// Exact squared Euclidean distance (in pixel units) from every pixel centre
/// to the nearest on-pixel centre of `seeds`. Pixels of an empty mask map to
/// a huge sentinel (detail::kEdtInf or larger).
inline std::vector<std::int64_t> squared_distance_transform(const BinaryRaster& seeds) {
  const int w = seeds.width(), h = seeds.height();
  std::vector<std::int64_t> dist(static_cast<std::size_t>(w) * h);

  // Column pass: squared vertical distance to nearest seed in each column.
  {
    std::vector<std::int64_t> f(h), d(h);
    std::vector<int> v;
    std::vector<double> z;
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y)
        f[y] = seeds.get(x, y) ? 0 : detail::kEdtInf;
      detail::edt_1d(f, d, h, v, z);
      for (int y = 0; y < h; ++y) dist[static_cast<std::size_t>(y) * w + x] = d[y];
    }
  }
  // Row pass over the column results.
  {
    std::vector<std::int64_t> f(w), d(w);
    std::vector<int> v;
    std::vector<double> z;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) f[x] = dist[static_cast<std::size_t>(y) * w + x];
      detail::edt_1d(f, d, w, v, z);
      for (int x = 0; x < w; ++x) dist[static_cast<std::size_t>(y) * w + x] = d[x];
    }
  }
  return dist;
}

/// Hausdorff distance between two non-empty masks on one grid, using the
/// Euclidean distance between pixel centres.
inline double hausdorff_distance(const BinaryRaster& a, const BinaryRaster& b) {
  a.require_same_grid(b, "hausdorff_distance");
  if (a.none() || b.none())
    throw std::invalid_argument("hausdorff_distance: undefined for the empty set");
  const auto da = squared_distance_transform(a);
  const auto db = squared_distance_transform(b);
  std::int64_t worst = 0;
  const int w = a.width(), h = a.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (a.get(x, y) && db[i] > worst) worst = db[i];
      if (b.get(x, y) && da[i] > worst) worst = da[i];
    }
  return std::sqrt(static_cast<double>(worst)) * a.pixel_size();
}

/// Signed distance function on the mask's own grid: positive distance to the
/// set outside, negative distance to the complement inside. The window is
/// the grid itself, so values for sets touching the border depend on it.
inline ScalarField signed_distance_field(const BinaryRaster& a) {
  if (a.none() || a.full())
    throw std::invalid_argument("signed_distance_field: mask must be neither empty nor full");
  const auto d_on = squared_distance_transform(a);
  const auto d_off = squared_distance_transform(complement(a));
  ScalarField field{a.width(), a.height(), a.pixel_size(), {}};
  field.values.resize(d_on.size());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * a.width() + x;
      field.values[i] = a.get(x, y)
                            ? -std::sqrt(static_cast<double>(d_off[i])) * a.pixel_size()
                            : std::sqrt(static_cast<double>(d_on[i])) * a.pixel_size();
    }
  return field;
}

/// Central-difference gradient magnitude; edges replicate their neighbour.
inline ScalarField gradient_magnitude_field(const ScalarField& f) {
  ScalarField out{f.width, f.height, f.pixel_size, {}};
  out.values.resize(f.values.size());
  const double inv2h = 1.0 / (2.0 * f.pixel_size);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x) {
      const double gx =
          (f.at(std::min(x + 1, f.width - 1), y) - f.at(std::max(x - 1, 0), y)) * inv2h;
      const double gy =
          (f.at(x, std::min(y + 1, f.height - 1)) - f.at(x, std::max(y - 1, 0))) * inv2h;
      out.at(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  return out;
}

/// Five-point Laplacian; edges replicate their neighbour.
inline ScalarField laplacian_field(const ScalarField& f) {
  ScalarField out{f.width, f.height, f.pixel_size, {}};
  out.values.resize(f.values.size());
  const double inv_h2 = 1.0 / (f.pixel_size * f.pixel_size);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x) {
      const double c = f.at(x, y);
      const double sum = f.at(std::max(x - 1, 0), y) + f.at(std::min(x + 1, f.width - 1), y) +
                         f.at(x, std::max(y - 1, 0)) + f.at(x, std::min(y + 1, f.height - 1));
      out.at(x, y) = (sum - 4.0 * c) * inv_h2;
    }
  return out;
}

}  // namespace setdepth
