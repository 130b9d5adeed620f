#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "setdepth/components.hpp"
#include "setdepth/distance.hpp"
#include "setdepth/raster.hpp"

namespace setdepth {

/// How an image is broken into analysis sets.
struct DecompositionConfig {
  enum class Mode { components, closest_hole };
  Mode mode = Mode::components;
  int connectivity = 8;          // foreground connectivity
  bool drop_border = true;
  int min_component_px = 1;
  Grid component_grid{100, 100, 1.0};

  void validate() const {
    if (min_component_px < 1)
      throw std::invalid_argument("DecompositionConfig: min_component_px must be >= 1");
    if (connectivity != 4 && connectivity != 8)
      throw std::invalid_argument("DecompositionConfig: connectivity must be 4 or 8");
    component_grid.validate();
  }
};

struct DecompositionResult {
  ComponentSet set;
  std::vector<bool> hole_free;   // parallel to set.components (closest_hole mode)
  int dropped_small = 0;
  int dropped_border = 0;
  bool grid_upscaled = false;    // a component forced the grid beyond the configured one
};

/// Connected-component decomposition: label, drop border-touching and
/// too-small components, centre the rest on the configured component grid.
inline DecompositionResult decompose_components(const BinaryRaster& img,
                                                const DecompositionConfig& cfg,
                                                std::string source_id = {}) {
  cfg.validate();
  ComponentSet raw = connected_components(img, cfg.connectivity, cfg.drop_border,
                                          std::move(source_id));
  DecompositionResult out;
  if (cfg.drop_border) {
    std::vector<std::int32_t> labels;
    const int all = detail::label_components(img, cfg.connectivity, labels);
    out.dropped_border = all - static_cast<int>(raw.components.size());
  }
  out.set.source_id = raw.source_id;
  Grid target = cfg.component_grid;
  target.pixel_size = img.pixel_size();
  // Components are delivered centred on a grid wide enough for all of them;
  // if that exceeds the configured grid, grow and flag it.
  if (!raw.components.empty()) {
    const Grid have = raw.components[0].grid();
    if (have.width > target.width || have.height > target.height) {
      target.width = std::max(target.width, have.width);
      target.height = std::max(target.height, have.height);
      out.grid_upscaled = true;
    }
  }
  for (auto& comp : raw.components) {
    if (comp.count() < static_cast<std::size_t>(cfg.min_component_px)) {
      ++out.dropped_small;
      continue;
    }
    out.set.components.push_back(centroid_centre(comp, target));
    out.hole_free.push_back(true);
  }
  return out;
}

namespace detail {

// Background components under the connectivity complementary to the
// foreground's. Holes are those not connected to the image border.
inline std::vector<std::vector<std::size_t>> find_holes(const BinaryRaster& img,
                                                        int fg_connectivity) {
  const int bg_connectivity = fg_connectivity == 8 ? 4 : 8;
  std::vector<std::int32_t> bg_labels;
  const int n_bg = label_components(complement(img), bg_connectivity, bg_labels);
  const int w = img.width(), h = img.height();
  std::vector<bool> border(static_cast<std::size_t>(n_bg) + 1, false);
  for (int x = 0; x < w; ++x) {
    if (auto l = bg_labels[x]) border[l] = true;
    if (auto l = bg_labels[static_cast<std::size_t>(h - 1) * w + x]) border[l] = true;
  }
  for (int y = 0; y < h; ++y) {
    if (auto l = bg_labels[static_cast<std::size_t>(y) * w]) border[l] = true;
    if (auto l = bg_labels[static_cast<std::size_t>(y) * w + w - 1]) border[l] = true;
  }
  std::vector<std::vector<std::size_t>> holes;  // pixel indices per hole
  std::vector<int> hole_of_label(static_cast<std::size_t>(n_bg) + 1, -1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::int32_t l = bg_labels[static_cast<std::size_t>(y) * w + x];
      if (!l || border[l]) continue;
      if (hole_of_label[l] < 0) {
        hole_of_label[l] = static_cast<int>(holes.size());
        holes.emplace_back();
      }
      holes[hole_of_label[l]].push_back(static_cast<std::size_t>(y) * w + x);
    }
  return holes;
}

}  // namespace detail

/// Duct-style decomposition: per foreground component, every pixel is
/// assigned to the closest hole (Euclidean distance between pixel centres,
/// ties to the lowest hole label); each hole's pixel group becomes one
/// output set. Components without holes pass through whole and are flagged.
inline DecompositionResult decompose_closest_hole(const BinaryRaster& img,
                                                  const DecompositionConfig& cfg,
                                                  std::string source_id = {}) {
  cfg.validate();
  DecompositionResult out;
  out.set.source_id = std::move(source_id);

  std::vector<std::int32_t> fg_labels;
  const int n_fg = detail::label_components(img, cfg.connectivity, fg_labels);
  const int w = img.width(), h = img.height();

  // Component bookkeeping: border contact and pixel counts.
  std::vector<bool> on_border(static_cast<std::size_t>(n_fg) + 1, false);
  std::vector<std::size_t> px_count(static_cast<std::size_t>(n_fg) + 1, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::int32_t l = fg_labels[static_cast<std::size_t>(y) * w + x];
      if (!l) continue;
      ++px_count[l];
      if (x == 0 || x == w - 1 || y == 0 || y == h - 1) on_border[l] = true;
    }

  // All holes of the image, each owned by the unique component enclosing it.
  const auto holes = detail::find_holes(img, cfg.connectivity);
  std::vector<std::vector<int>> holes_of_component(static_cast<std::size_t>(n_fg) + 1);
  std::vector<std::vector<std::int64_t>> hole_edt(holes.size());
  for (std::size_t hi = 0; hi < holes.size(); ++hi) {
    const std::size_t probe = holes[hi].front();
    const int pxx = static_cast<int>(probe % w), pxy = static_cast<int>(probe / w);
    std::int32_t owner = 0;
    for (int d = 0; d < 4 && !owner; ++d) {
      static const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      const int nx = pxx + off[d][0], ny = pxy + off[d][1];
      if (nx >= 0 && nx < w && ny >= 0 && ny < h)
        owner = fg_labels[static_cast<std::size_t>(ny) * w + nx];
    }
    if (!owner) continue;  // isolated hole with no foreground neighbour
    holes_of_component[owner].push_back(static_cast<int>(hi));
    BinaryRaster hole_mask(img.grid());
    for (std::size_t p : holes[hi])
      hole_mask.set(static_cast<int>(p % w), static_cast<int>(p / w), true);
    hole_edt[hi] = squared_distance_transform(hole_mask);
  }

  // First pass: build every output part on the image grid.
  std::vector<BinaryRaster> pieces;
  std::vector<bool> piece_hole_free;
  for (int label = 1; label <= n_fg; ++label) {
    if (cfg.drop_border && on_border[label]) {
      ++out.dropped_border;
      continue;
    }
    if (px_count[label] < static_cast<std::size_t>(cfg.min_component_px)) {
      ++out.dropped_small;
      continue;
    }
    const auto& comp_holes = holes_of_component[label];
    if (comp_holes.empty()) {
      BinaryRaster whole(img.grid());
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (fg_labels[static_cast<std::size_t>(y) * w + x] == label) whole.set(x, y, true);
      pieces.push_back(std::move(whole));
      piece_hole_free.push_back(true);
      continue;
    }
    std::vector<BinaryRaster> parts(comp_holes.size(), BinaryRaster(img.grid()));
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (fg_labels[static_cast<std::size_t>(y) * w + x] != label) continue;
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        std::size_t best = 0;
        std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
        for (std::size_t hi = 0; hi < comp_holes.size(); ++hi) {
          const std::int64_t d = hole_edt[comp_holes[hi]][p];
          if (d < best_d) {
            best_d = d;
            best = hi;
          }
        }
        parts[best].set(x, y, true);
      }
    for (auto& part : parts) {
      if (part.none()) continue;
      pieces.push_back(std::move(part));
      piece_hole_free.push_back(false);
    }
  }

  // Second pass: centre everything on a grid sized for the worst extent.
  Grid target = cfg.component_grid;
  target.pixel_size = img.pixel_size();
  for (const auto& piece : pieces) {
    const PixelBox box = bounding_box(piece);
    const BinaryRaster cropped = crop(piece, box);
    const auto [cx, cy] = centre_of_mass(cropped);
    const int need_w =
        2 * static_cast<int>(std::ceil(std::max(cx, cropped.width() - cx))) + 2;
    const int need_h =
        2 * static_cast<int>(std::ceil(std::max(cy, cropped.height() - cy))) + 2;
    if (need_w > target.width || need_h > target.height) {
      target.width = std::max(target.width, need_w);
      target.height = std::max(target.height, need_h);
      out.grid_upscaled = true;
    }
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    out.set.components.push_back(centroid_centre(pieces[i], target));
    out.hole_free.push_back(piece_hole_free[i]);
  }
  return out;
}

inline DecompositionResult decompose(const BinaryRaster& img, const DecompositionConfig& cfg,
                                     std::string source_id = {}) {
  return cfg.mode == DecompositionConfig::Mode::components
             ? decompose_components(img, cfg, std::move(source_id))
             : decompose_closest_hole(img, cfg, std::move(source_id));
}

}  // namespace setdepth
