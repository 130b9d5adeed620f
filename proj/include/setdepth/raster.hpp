#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace setdepth {

/// Regular pixel grid: dimensions in pixels plus the physical edge length of
/// one pixel in length units.
struct Grid {
  int width = 0;
  int height = 0;
  double pixel_size = 1.0;

  bool operator==(const Grid&) const = default;

  double area() const {
    return static_cast<double>(width) * height * pixel_size * pixel_size;
  }

  void validate() const {
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("Grid: dimensions must be positive");
    if (!(pixel_size > 0.0))
      throw std::invalid_argument("Grid: pixel_size must be positive");
  }
};

/// A closed planar set discretised as a boolean pixel mask.
///
/// Pixel (x, y) covers [x, x+1) x [y, y+1) in pixel units; its centre is
/// (x + 0.5, y + 0.5). The logical origin of the set sits at the grid centre
/// (width/2, height/2), which every geometric operation (scaling, Minkowski
/// sums) respects. The empty mask is a valid value and represents the empty
/// set.
///
/// Rows are packed into 64-bit words, least significant bit first. Bits past
/// `width` in the last word of each row are kept zero; all bulk operations
/// rely on that invariant.
class BinaryRaster {
 public:
  BinaryRaster() = default;

  BinaryRaster(int width, int height, double pixel_size = 1.0)
      : width_(width), height_(height), pixel_size_(pixel_size) {
    grid().validate();
    words_per_row_ = (width_ + 63) / 64;
    words_.assign(static_cast<std::size_t>(words_per_row_) * height_, 0);
  }

  explicit BinaryRaster(const Grid& g) : BinaryRaster(g.width, g.height, g.pixel_size) {}

  int width() const { return width_; }
  int height() const { return height_; }
  double pixel_size() const { return pixel_size_; }
  Grid grid() const { return Grid{width_, height_, pixel_size_}; }
  int words_per_row() const { return words_per_row_; }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  bool get(int x, int y) const {
    return (word(x, y) >> (x & 63)) & 1u;
  }

  void set(int x, int y, bool value) {
    std::uint64_t& w = word(x, y);
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (value)
      w |= bit;
    else
      w &= ~bit;
  }

  const std::uint64_t* row(int y) const {
    return words_.data() + static_cast<std::size_t>(y) * words_per_row_;
  }
  std::uint64_t* row(int y) {
    return words_.data() + static_cast<std::size_t>(y) * words_per_row_;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  std::size_t count() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }

  bool none() const { return !any(); }

  bool full() const { return count() == static_cast<std::size_t>(width_) * height_; }

  double area() const { return static_cast<double>(count()) * pixel_size_ * pixel_size_; }

  bool same_grid(const BinaryRaster& other) const { return grid() == other.grid(); }

  bool operator==(const BinaryRaster& other) const {
    return grid() == other.grid() && words_ == other.words_;
  }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  void fill() {
    for (int y = 0; y < height_; ++y) {
      std::uint64_t* r = row(y);
      for (int wi = 0; wi < words_per_row_; ++wi) r[wi] = ~std::uint64_t{0};
      r[words_per_row_ - 1] &= last_word_mask();
    }
  }

  /// In-place pixelwise OR; grids must match.
  void or_with(const BinaryRaster& other) {
    require_same_grid(other, "or_with");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  }

  /// In-place pixelwise AND; grids must match.
  void and_with(const BinaryRaster& other) {
    require_same_grid(other, "and_with");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  }

  std::uint64_t last_word_mask() const {
    const int used = width_ & 63;
    return used == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << used) - 1;
  }

  void require_same_grid(const BinaryRaster& other, const char* op) const {
    if (!same_grid(other))
      throw std::invalid_argument(std::string(op) + ": operands on different grids");
  }

 private:
  std::uint64_t& word(int x, int y) {
    return words_[static_cast<std::size_t>(y) * words_per_row_ + (x >> 6)];
  }
  const std::uint64_t& word(int x, int y) const {
    return words_[static_cast<std::size_t>(y) * words_per_row_ + (x >> 6)];
  }

  int width_ = 0;
  int height_ = 0;
  double pixel_size_ = 1.0;
  int words_per_row_ = 0;
  std::vector<std::uint64_t> words_;
};

inline BinaryRaster set_union(const BinaryRaster& a, const BinaryRaster& b) {
  a.require_same_grid(b, "set_union");
  BinaryRaster out = a;
  out.or_with(b);
  return out;
}

inline BinaryRaster set_intersection(const BinaryRaster& a, const BinaryRaster& b) {
  a.require_same_grid(b, "set_intersection");
  BinaryRaster out = a;
  out.and_with(b);
  return out;
}

inline BinaryRaster complement(const BinaryRaster& a) {
  BinaryRaster out(a.grid());
  for (int y = 0; y < a.height(); ++y) {
    const std::uint64_t* src = a.row(y);
    std::uint64_t* dst = out.row(y);
    for (int wi = 0; wi < a.words_per_row(); ++wi) dst[wi] = ~src[wi];
    dst[a.words_per_row() - 1] &= a.last_word_mask();
  }
  return out;
}

/// True iff every on-pixel of a is an on-pixel of b.
inline bool is_subset(const BinaryRaster& a, const BinaryRaster& b) {
  a.require_same_grid(b, "is_subset");
  const auto& wa = a.words();
  const auto& wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i)
    if (wa[i] & ~wb[i]) return false;
  return true;
}

inline std::size_t symmetric_difference_pixels(const BinaryRaster& a, const BinaryRaster& b) {
  a.require_same_grid(b, "symmetric_difference_pixels");
  const auto& wa = a.words();
  const auto& wb = b.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) total += std::popcount(wa[i] ^ wb[i]);
  return total;
}

/// Lebesgue measure of the symmetric difference, in length units squared.
inline double symmetric_difference_area(const BinaryRaster& a, const BinaryRaster& b) {
  return static_cast<double>(symmetric_difference_pixels(a, b)) * a.pixel_size() *
         a.pixel_size();
}

/// Structuring elements for one-pixel morphology.
enum class Neighbourhood {
  cross,  // 4-neighbour
  box     // 8-neighbour
};

/// Copy of a shifted by (dx, dy), zero-filled at the grid edges.
inline BinaryRaster shift_raster(const BinaryRaster& a, int dx, int dy) {
  BinaryRaster out(a.grid());
  const int wpr = a.words_per_row();
  for (int y = 0; y < a.height(); ++y) {
    int sy = y - dy;
    if (sy < 0 || sy >= a.height()) continue;
    const std::uint64_t* s = a.row(sy);
    std::uint64_t* d = out.row(y);
    if (dx == 0) {
      for (int wi = 0; wi < wpr; ++wi) d[wi] = s[wi];
    } else if (dx > 0) {
      const int ws = dx >> 6, bs = dx & 63;
      for (int wi = wpr - 1; wi >= 0; --wi) {
        std::uint64_t v = 0;
        if (wi - ws >= 0) v = bs == 0 ? s[wi - ws] : s[wi - ws] << bs;
        if (bs != 0 && wi - ws - 1 >= 0) v |= s[wi - ws - 1] >> (64 - bs);
        d[wi] = v;
      }
    } else {
      const int adx = -dx;
      const int ws = adx >> 6, bs = adx & 63;
      for (int wi = 0; wi < wpr; ++wi) {
        std::uint64_t v = 0;
        if (wi + ws < wpr) v = bs == 0 ? s[wi + ws] : s[wi + ws] >> bs;
        if (bs != 0 && wi + ws + 1 < wpr) v |= s[wi + ws + 1] << (64 - bs);
        d[wi] = v;
      }
    }
    d[wpr - 1] &= a.last_word_mask();
  }
  return out;
}

namespace detail {

inline const int kCrossOffsets[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
inline const int kBoxOffsets[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                      {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

}  // namespace detail

/// One-pixel dilation; output clipped to the grid.
inline BinaryRaster dilate(const BinaryRaster& a, Neighbourhood nb = Neighbourhood::cross) {
  BinaryRaster out = a;
  const auto* offs = nb == Neighbourhood::cross ? detail::kCrossOffsets : detail::kBoxOffsets;
  const int n = nb == Neighbourhood::cross ? 4 : 8;
  for (int i = 0; i < n; ++i) out.or_with(shift_raster(a, offs[i][0], offs[i][1]));
  return out;
}

/// One-pixel erosion; the outside of the grid counts as off, so border
/// pixels always erode.
inline BinaryRaster erode(const BinaryRaster& a, Neighbourhood nb = Neighbourhood::cross) {
  BinaryRaster out = a;
  const auto* offs = nb == Neighbourhood::cross ? detail::kCrossOffsets : detail::kBoxOffsets;
  const int n = nb == Neighbourhood::cross ? 4 : 8;
  for (int i = 0; i < n; ++i) out.and_with(shift_raster(a, offs[i][0], offs[i][1]));
  return out;
}

inline BinaryRaster flip_x(const BinaryRaster& a) {
  BinaryRaster out(a.grid());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y)) out.set(a.width() - 1 - x, y, true);
  return out;
}

inline BinaryRaster flip_y(const BinaryRaster& a) {
  BinaryRaster out(a.grid());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y)) out.set(x, a.height() - 1 - y, true);
  return out;
}

/// Quarter turn counter-clockwise: (x, y) -> (y, width-1-x) on an h x w grid.
inline BinaryRaster rotate90(const BinaryRaster& a) {
  BinaryRaster out(a.height(), a.width(), a.pixel_size());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y)) out.set(y, a.width() - 1 - x, true);
  return out;
}

/// Integer translation on the same grid; throws if content would clip.
inline BinaryRaster translate(const BinaryRaster& a, int dx, int dy) {
  BinaryRaster out(a.grid());
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y)) {
        int nx = x + dx, ny = y + dy;
        if (!a.in_bounds(nx, ny))
          throw std::invalid_argument("translate: content leaves the grid");
        out.set(nx, ny, true);
      }
  return out;
}

/// Inclusive bounding box of the on-pixels.
struct PixelBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
  bool empty() const { return x1 < x0 || y1 < y0; }
  int width() const { return empty() ? 0 : x1 - x0 + 1; }
  int height() const { return empty() ? 0 : y1 - y0 + 1; }
};

inline PixelBox bounding_box(const BinaryRaster& a) {
  PixelBox box{a.width(), a.height(), -1, -1};
  for (int y = 0; y < a.height(); ++y) {
    const std::uint64_t* r = a.row(y);
    bool row_any = false;
    for (int wi = 0; wi < a.words_per_row(); ++wi) {
      std::uint64_t w = r[wi];
      if (!w) continue;
      row_any = true;
      int lo = wi * 64 + std::countr_zero(w);
      int hi = wi * 64 + 63 - std::countl_zero(w);
      box.x0 = std::min(box.x0, lo);
      box.x1 = std::max(box.x1, hi);
    }
    if (row_any) {
      box.y0 = std::min(box.y0, y);
      box.y1 = std::max(box.y1, y);
    }
  }
  if (box.x1 < box.x0) return PixelBox{};
  return box;
}

inline BinaryRaster crop(const BinaryRaster& a, const PixelBox& box) {
  if (box.empty()) throw std::invalid_argument("crop: empty box");
  BinaryRaster out(box.width(), box.height(), a.pixel_size());
  for (int y = box.y0; y <= box.y1; ++y)
    for (int x = box.x0; x <= box.x1; ++x)
      if (a.get(x, y)) out.set(x - box.x0, y - box.y0, true);
  return out;
}

/// OR the content of src into dst, with src pixel (0,0) landing on dst pixel
/// (dx, dy). The caller guarantees the shifted content fits.
inline void blit_or(BinaryRaster& dst, const BinaryRaster& src, int dx, int dy) {
  for (int y = 0; y < src.height(); ++y) {
    const std::uint64_t* s = src.row(y);
    std::uint64_t* d = dst.row(y + dy);
    const int word_shift = dx >> 6;
    const int bit_shift = dx & 63;
    const int wpr_s = src.words_per_row();
    const int wpr_d = dst.words_per_row();
    for (int wi = 0; wi < wpr_s; ++wi) {
      std::uint64_t w = s[wi];
      if (!w) continue;
      int base = wi + word_shift;
      if (bit_shift == 0) {
        d[base] |= w;
      } else {
        d[base] |= w << bit_shift;
        if (base + 1 < wpr_d) d[base + 1] |= w >> (64 - bit_shift);
      }
    }
  }
}

}  // namespace setdepth
