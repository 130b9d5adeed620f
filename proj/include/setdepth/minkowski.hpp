#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "setdepth/raster.hpp"

namespace setdepth {

namespace detail {

// Candidate source pixel indices for a logical sample point p, where the
// source pixel q covers [anchor + q - 0.5, anchor + q + 0.5) around its
// centre anchor + q. A point landing exactly on a pixel boundary yields both
// neighbours, which keeps sampling exactly mirror-symmetric.
inline int sample_candidates(double p, double anchor, int out[2]) {
  const double v = p - anchor + 0.5;
  const double r = std::nearbyint(v);
  if (std::abs(v - r) < 1e-9) {
    out[0] = static_cast<int>(r) - 1;
    out[1] = static_cast<int>(r);
    return 2;
  }
  out[0] = static_cast<int>(std::floor(v));
  return 1;
}

// Logical coordinate of pixel 0's centre when the origin is the grid centre.
inline double centred_anchor(int dim) { return 0.5 - 0.5 * dim; }

inline bool sample_mask(const BinaryRaster& src, double px, double py, double ax, double ay) {
  int cx[2], cy[2];
  const int nx = sample_candidates(px, ax, cx);
  const int ny = sample_candidates(py, ay, cy);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int qx = cx[i], qy = cy[j];
      if (qx >= 0 && qx < src.width() && qy >= 0 && qy < src.height() && src.get(qx, qy))
        return true;
    }
  return false;
}

}  // namespace detail

/// Minkowski (dilation) sum of two masks with a shared pixel size. The
/// output grid is (wa+wb-1) x (ha+hb-1); with both origins at their grid
/// centres, output index (xa+xb, ya+yb) carries exactly the offset sum, for
/// any combination of odd and even dimensions.
inline BinaryRaster minkowski_sum(const BinaryRaster& a, const BinaryRaster& b) {
  if (a.pixel_size() != b.pixel_size())
    throw std::invalid_argument("minkowski_sum: pixel sizes differ");
  BinaryRaster out(a.width() + b.width() - 1, a.height() + b.height() - 1, a.pixel_size());
  const BinaryRaster& shifts = a.count() <= b.count() ? a : b;
  const BinaryRaster& body = a.count() <= b.count() ? b : a;
  for (int y = 0; y < shifts.height(); ++y)
    for (int x = 0; x < shifts.width(); ++x)
      if (shifts.get(x, y)) blit_or(out, body, x, y);
  return out;
}

namespace detail {

// Marks the pixel(s) of `out` whose cell contains the logical point (px,
// py); an exact cell-boundary hit marks both neighbours, keeping the map
// mirror-symmetric.
inline void mark_point(BinaryRaster& out, double px, double py, double ax, double ay) {
  int cx[2], cy[2];
  const int nx = sample_candidates(px, ax, cx);
  const int ny = sample_candidates(py, ay, cy);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (cx[i] >= 0 && cx[i] < out.width() && cy[j] >= 0 && cy[j] < out.height())
        out.set(cx[i], cy[j], true);
}

}  // namespace detail

/// Scaling about the grid centre with nearest-pixel membership, no
/// anti-aliasing. An output pixel is on iff its centre, divided by the
/// factor, falls inside an on-pixel of the input. If a strong downscale
/// leaves every sample point off the content entirely, the forward image of
/// the on-pixel centres is used instead, so a non-empty set never scales to
/// the empty mask. Exact boundary hits resolve to both neighbours, which
/// keeps the map symmetric under flips and quarter turns.
inline BinaryRaster scale(const BinaryRaster& a, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale: factor must be positive");
  const int w_out = std::max<long long>(1, std::llround(a.width() * factor));
  const int h_out = std::max<long long>(1, std::llround(a.height() * factor));
  BinaryRaster out(static_cast<int>(w_out), static_cast<int>(h_out), a.pixel_size());
  const PixelBox box = bounding_box(a);
  if (box.empty()) return out;
  const double ax = detail::centred_anchor(a.width());
  const double ay = detail::centred_anchor(a.height());
  const double ox = detail::centred_anchor(out.width());
  const double oy = detail::centred_anchor(out.height());
  const double inv = 1.0 / factor;
  auto range = [](double lo_logical, double hi_logical, double anchor, int n) {
    int lo = static_cast<int>(std::floor(lo_logical - anchor + 0.5)) - 1;
    int hi = static_cast<int>(std::ceil(hi_logical - anchor + 0.5)) + 1;
    return std::pair<int, int>{std::max(0, lo), std::min(n - 1, hi)};
  };
  const auto [tx0, tx1] = range((ax + box.x0) * factor, (ax + box.x1) * factor, ox, out.width());
  const auto [ty0, ty1] = range((ay + box.y0) * factor, (ay + box.y1) * factor, oy, out.height());
  for (int y = ty0; y <= ty1; ++y) {
    const double py = (oy + y) * inv;
    for (int x = tx0; x <= tx1; ++x) {
      const double px = (ox + x) * inv;
      if (detail::sample_mask(a, px, py, ax, ay)) out.set(x, y, true);
    }
  }
  if (out.none()) {
    for (int y = box.y0; y <= box.y1; ++y)
      for (int x = box.x0; x <= box.x1; ++x)
        if (a.get(x, y))
          detail::mark_point(out, (ax + x) * factor, (ay + y) * factor, ox, oy);
  }
  return out;
}

/// Re-embeds a mask, centre on centre, into another grid (same pixel size).
/// Content falling outside the target is clipped; half-pixel lattice
/// mismatches resolve symmetrically via boundary double-sampling.
inline BinaryRaster resample_centred(const BinaryRaster& src, const Grid& target) {
  BinaryRaster out(target);
  const PixelBox box = bounding_box(src);
  if (box.empty()) return out;
  const double ax = detail::centred_anchor(src.width());
  const double ay = detail::centred_anchor(src.height());
  const double ox = detail::centred_anchor(out.width());
  const double oy = detail::centred_anchor(out.height());
  const int tx0 = std::max(0, static_cast<int>(std::floor(ax + box.x0 - ox)) - 1);
  const int tx1 = std::min(out.width() - 1, static_cast<int>(std::ceil(ax + box.x1 - ox)) + 1);
  const int ty0 = std::max(0, static_cast<int>(std::floor(ay + box.y0 - oy)) - 1);
  const int ty1 = std::min(out.height() - 1, static_cast<int>(std::ceil(ay + box.y1 - oy)) + 1);
  for (int y = ty0; y <= ty1; ++y)
    for (int x = tx0; x <= tx1; ++x)
      if (detail::sample_mask(src, ox + x, oy + y, ax, ay)) out.set(x, y, true);
  return out;
}

/// Downscale of `src` by 1/divisor sampled directly onto `target`, centre on
/// centre: one rounding step in total. Content that a sparse sample grid
/// would miss entirely is rescued through the forward image of its pixels.
inline BinaryRaster scale_onto(const BinaryRaster& src, double divisor, const Grid& target) {
  BinaryRaster out(target);
  const PixelBox box = bounding_box(src);
  if (box.empty()) return out;
  const double ax = detail::centred_anchor(src.width());
  const double ay = detail::centred_anchor(src.height());
  const double ox = detail::centred_anchor(out.width());
  const double oy = detail::centred_anchor(out.height());
  const int tx0 = std::max(0, static_cast<int>(std::floor((ax + box.x0) / divisor - ox)) - 1);
  const int tx1 =
      std::min(out.width() - 1, static_cast<int>(std::ceil((ax + box.x1) / divisor - ox)) + 1);
  const int ty0 = std::max(0, static_cast<int>(std::floor((ay + box.y0) / divisor - oy)) - 1);
  const int ty1 =
      std::min(out.height() - 1, static_cast<int>(std::ceil((ay + box.y1) / divisor - oy)) + 1);
  for (int y = ty0; y <= ty1; ++y)
    for (int x = tx0; x <= tx1; ++x)
      if (detail::sample_mask(src, (ox + x) * divisor, (oy + y) * divisor, ax, ay))
        out.set(x, y, true);
  if (out.none()) {
    for (int y = box.y0; y <= box.y1; ++y)
      for (int x = box.x0; x <= box.x1; ++x)
        if (src.get(x, y))
          detail::mark_point(out, (ax + x) / divisor, (ay + y) / divisor, ox, oy);
  }
  return out;
}

/// Minkowski convex combination with weights on the 1/N grid, evaluated on
/// the common grid of the inputs. The pieces are scaled up by their integer
/// numerators (exact), Minkowski-summed at N-fold resolution, and brought
/// back in a single downscale, so no per-piece rounding bias accrues. A
/// full-weight vertex returns that set bit-exactly.
inline BinaryRaster minkowski_convex_combination(const std::vector<BinaryRaster>& sets,
                                                 const std::vector<int>& numerators, int N) {
  if (sets.empty()) throw std::invalid_argument("minkowski_convex_combination: no sets");
  if (sets.size() != numerators.size())
    throw std::invalid_argument("minkowski_convex_combination: weight count mismatch");
  if (N < 1) throw std::invalid_argument("minkowski_convex_combination: N must be positive");
  int total = 0;
  for (int n : numerators) {
    if (n < 0) throw std::invalid_argument("minkowski_convex_combination: negative weight");
    total += n;
  }
  if (total != N)
    throw std::invalid_argument("minkowski_convex_combination: weights must sum to 1");
  const Grid grid = sets[0].grid();
  for (const auto& s : sets) {
    if (s.grid() != grid)
      throw std::invalid_argument("minkowski_convex_combination: sets on different grids");
    if (s.none()) throw std::invalid_argument("minkowski_convex_combination: empty set");
  }
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (numerators[i] == N) return sets[i];

  BinaryRaster acc;
  bool have = false;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (numerators[i] == 0) continue;
    BinaryRaster piece = numerators[i] == 1
                             ? sets[i]
                             : scale(sets[i], static_cast<double>(numerators[i]));
    acc = have ? minkowski_sum(acc, piece) : std::move(piece);
    have = true;
  }
  return scale_onto(acc, static_cast<double>(N), grid);
}

/// Minkowski convex combination p_1 F_1 + ... + p_m F_m, evaluated on the
/// common grid of the inputs. Weights must be non-negative and sum to one;
/// zero-weight terms are skipped, and a unit weight returns that set
/// bit-exactly.
inline BinaryRaster minkowski_convex_combination(const std::vector<BinaryRaster>& sets,
                                                 const std::vector<double>& weights) {
  if (sets.empty()) throw std::invalid_argument("minkowski_convex_combination: no sets");
  if (sets.size() != weights.size())
    throw std::invalid_argument("minkowski_convex_combination: weight count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("minkowski_convex_combination: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("minkowski_convex_combination: weights must sum to 1");
  const Grid grid = sets[0].grid();
  for (const auto& s : sets) {
    if (s.grid() != grid)
      throw std::invalid_argument("minkowski_convex_combination: sets on different grids");
    if (s.none())
      throw std::invalid_argument("minkowski_convex_combination: empty set");
  }

  BinaryRaster acc;
  bool have = false;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    BinaryRaster piece = weights[i] == 1.0 ? sets[i] : scale(sets[i], weights[i]);
    acc = have ? minkowski_sum(acc, piece) : std::move(piece);
    have = true;
  }
  if (!have) throw std::invalid_argument("minkowski_convex_combination: all weights zero");
  if (acc.grid() == grid) return acc;
  return resample_centred(acc, grid);
}

namespace detail {

// Accumulator for iterated Minkowski sums: a cropped mask plus the logical
// coordinates of its pixel (0,0) centre. Anchors stay on the half-integer
// lattice, so they are exact in double.
struct OffsetMask {
  BinaryRaster mask;
  double ax = 0.0;
  double ay = 0.0;
};

inline OffsetMask cropped_offset_mask(const BinaryRaster& a) {
  const PixelBox box = bounding_box(a);
  OffsetMask om;
  om.mask = crop(a, box);
  om.ax = centred_anchor(a.width()) + box.x0;
  om.ay = centred_anchor(a.height()) + box.y0;
  return om;
}

inline OffsetMask minkowski_accumulate(const OffsetMask& acc, const OffsetMask& next) {
  OffsetMask out;
  out.mask = BinaryRaster(acc.mask.width() + next.mask.width() - 1,
                          acc.mask.height() + next.mask.height() - 1, acc.mask.pixel_size());
  const BinaryRaster& shifts = acc.mask.count() <= next.mask.count() ? acc.mask : next.mask;
  const BinaryRaster& body = acc.mask.count() <= next.mask.count() ? next.mask : acc.mask;
  for (int y = 0; y < shifts.height(); ++y)
    for (int x = 0; x < shifts.width(); ++x)
      if (shifts.get(x, y)) blit_or(out.mask, body, x, y);
  out.ax = acc.ax + next.ax;
  out.ay = acc.ay + next.ay;
  return out;
}

}  // namespace detail

/// Minkowski average (1/n)(F_1 + ... + F_n) on the common input grid: the
/// estimator of the selection expectation from a sample. The full-resolution
/// running sum is kept and scaled once at the end; if the accumulator would
/// exceed max_accum_pixels, the remaining sets are folded in through a
/// running mean instead (bounded memory, slightly more rounding).
inline BinaryRaster minkowski_average(const std::vector<BinaryRaster>& sets,
                                      std::size_t max_accum_pixels = std::size_t{64} << 20) {
  if (sets.empty()) throw std::invalid_argument("minkowski_average: empty list");
  const Grid grid = sets[0].grid();
  for (const auto& s : sets) {
    if (s.grid() != grid)
      throw std::invalid_argument("minkowski_average: sets on different grids");
    if (s.none()) return BinaryRaster(grid);  // empty term absorbs the sum
  }
  if (sets.size() == 1) return sets[0];

  detail::OffsetMask acc = detail::cropped_offset_mask(sets[0]);
  std::size_t folded = 1;
  for (std::size_t i = 1; i < sets.size(); ++i) {
    detail::OffsetMask next = detail::cropped_offset_mask(sets[i]);
    const std::size_t grown_w = acc.mask.width() + next.mask.width() - 1;
    const std::size_t grown_h = acc.mask.height() + next.mask.height() - 1;
    if (grown_w * grown_h > max_accum_pixels) {
      // Fold the accumulated sum down to a running mean, then continue with
      // the pairwise form m_k = (k-1)/k * m_{k-1} + (1/k) X_k.
      BinaryRaster mean = BinaryRaster(grid);
      {
        const double n = static_cast<double>(folded);
        const double ox = detail::centred_anchor(grid.width);
        const double oy = detail::centred_anchor(grid.height);
        for (int y = 0; y < mean.height(); ++y)
          for (int x = 0; x < mean.width(); ++x)
            if (detail::sample_mask(acc.mask, (ox + x) * n, (oy + y) * n, acc.ax, acc.ay))
              mean.set(x, y, true);
        for (int y = 0; y < acc.mask.height(); ++y)
          for (int x = 0; x < acc.mask.width(); ++x)
            if (acc.mask.get(x, y))
              detail::mark_point(mean, (acc.ax + x) / n, (acc.ay + y) / n, ox, oy);
      }
      for (std::size_t j = i; j < sets.size(); ++j) {
        const double k = static_cast<double>(folded + 1);
        BinaryRaster part_old = scale(mean, (k - 1.0) / k);
        BinaryRaster part_new = scale(sets[j], 1.0 / k);
        mean = resample_centred(minkowski_sum(part_old, part_new), grid);
        ++folded;
      }
      return mean;
    }
    acc = detail::minkowski_accumulate(acc, next);
    ++folded;
  }

  // One downscale of the accumulated sum back onto the input grid.
  BinaryRaster out(grid);
  const double n = static_cast<double>(folded);
  const double ox = detail::centred_anchor(grid.width);
  const double oy = detail::centred_anchor(grid.height);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      if (detail::sample_mask(acc.mask, (ox + x) * n, (oy + y) * n, acc.ax, acc.ay))
        out.set(x, y, true);
  for (int y = 0; y < acc.mask.height(); ++y)
    for (int x = 0; x < acc.mask.width(); ++x)
      if (acc.mask.get(x, y))
        detail::mark_point(out, (acc.ax + x) / n, (acc.ay + y) / n, ox, oy);
  return out;
}

}  // namespace setdepth
