#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "setdepth/raster.hpp"

namespace setdepth {

/// Connected components of one source image, each cropped and centred on a
/// common grid.
struct ComponentSet {
  std::vector<BinaryRaster> components;
  std::string source_id;
};

namespace detail {

/// Flood-fill labelling; labels start at 1 in scan order, 0 = background.
inline int label_components(const BinaryRaster& a, int connectivity,
                            std::vector<std::int32_t>& labels) {
  if (connectivity != 4 && connectivity != 8)
    throw std::invalid_argument("connected_components: connectivity must be 4 or 8");
  const int w = a.width(), h = a.height();
  labels.assign(static_cast<std::size_t>(w) * h, 0);
  int next = 0;
  std::vector<std::pair<int, int>> stack;
  for (int sy = 0; sy < h; ++sy)
    for (int sx = 0; sx < w; ++sx) {
      if (!a.get(sx, sy) || labels[static_cast<std::size_t>(sy) * w + sx]) continue;
      ++next;
      stack.assign(1, {sx, sy});
      labels[static_cast<std::size_t>(sy) * w + sx] = next;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (connectivity == 4 && dx != 0 && dy != 0) continue;
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            std::int32_t& l = labels[static_cast<std::size_t>(ny) * w + nx];
            if (l == 0 && a.get(nx, ny)) {
              l = next;
              stack.push_back({nx, ny});
            }
          }
      }
    }
  return next;
}

}  // namespace detail

/// Centre of mass of the on-pixels, in pixel units (pixel centres).
inline std::pair<double, double> centre_of_mass(const BinaryRaster& a) {
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y)) {
        sx += x + 0.5;
        sy += y + 0.5;
        ++n;
      }
  if (n == 0) throw std::invalid_argument("centre_of_mass: empty mask");
  return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

/// Integer translation of a non-empty mask onto `target` so that the rounded
/// (half-up) centre of mass lands on the target grid centre. Throws if the
/// content does not fit.
inline BinaryRaster centroid_centre(const BinaryRaster& a, const Grid& target) {
  target.validate();
  const PixelBox box = bounding_box(a);
  if (box.empty()) throw std::invalid_argument("centroid_centre: empty mask");
  if (box.width() > target.width || box.height() > target.height)
    throw std::invalid_argument("centroid_centre: content does not fit the target grid");
  const auto [cx, cy] = centre_of_mass(a);
  const int dx = static_cast<int>(std::floor(0.5 * target.width - cx + 0.5));
  const int dy = static_cast<int>(std::floor(0.5 * target.height - cy + 0.5));
  BinaryRaster out(target);
  for (int y = box.y0; y <= box.y1; ++y)
    for (int x = box.x0; x <= box.x1; ++x)
      if (a.get(x, y)) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= target.width || ny < 0 || ny >= target.height)
          throw std::invalid_argument("centroid_centre: content does not fit the target grid");
        out.set(nx, ny, true);
      }
  return out;
}

/// Isolates connected components. Components with a pixel on the grid
/// boundary are discarded when drop_border_touching is set; the retained
/// ones are cropped and centred by centre of mass on a shared grid just
/// large enough for the largest of them.
inline ComponentSet connected_components(const BinaryRaster& a, int connectivity = 8,
                                         bool drop_border_touching = false,
                                         std::string source_id = {}) {
  std::vector<std::int32_t> labels;
  const int n = detail::label_components(a, connectivity, labels);
  const int w = a.width(), h = a.height();

  std::vector<PixelBox> boxes(static_cast<std::size_t>(n) + 1, PixelBox{w, h, -1, -1});
  std::vector<bool> on_border(static_cast<std::size_t>(n) + 1, false);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::int32_t label = labels[static_cast<std::size_t>(y) * w + x];
      if (!label) continue;
      PixelBox& box = boxes[label];
      box.x0 = std::min(box.x0, x);
      box.x1 = std::max(box.x1, x);
      box.y0 = std::min(box.y0, y);
      box.y1 = std::max(box.y1, y);
      if (x == 0 || x == w - 1 || y == 0 || y == h - 1) on_border[label] = true;
    }

  std::vector<BinaryRaster> cropped;
  int max_w = 0, max_h = 0;
  for (int label = 1; label <= n; ++label) {
    if (drop_border_touching && on_border[label]) continue;
    const PixelBox& box = boxes[label];
    BinaryRaster comp(box.width(), box.height(), a.pixel_size());
    for (int y = box.y0; y <= box.y1; ++y)
      for (int x = box.x0; x <= box.x1; ++x)
        if (labels[static_cast<std::size_t>(y) * w + x] == label)
          comp.set(x - box.x0, y - box.y0, true);
    // The common grid must hold every component centred by its centre of
    // mass, which may sit well off the bounding-box centre.
    const auto [cx, cy] = centre_of_mass(comp);
    max_w = std::max(max_w, 2 * static_cast<int>(std::ceil(
                                    std::max(cx, comp.width() - cx))) + 2);
    max_h = std::max(max_h, 2 * static_cast<int>(std::ceil(
                                    std::max(cy, comp.height() - cy))) + 2);
    cropped.push_back(std::move(comp));
  }

  ComponentSet out;
  out.source_id = std::move(source_id);
  if (cropped.empty()) return out;
  const Grid common{max_w, max_h, a.pixel_size()};
  out.components.reserve(cropped.size());
  for (const auto& comp : cropped) out.components.push_back(centroid_centre(comp, common));
  return out;
}

}  // namespace setdepth
