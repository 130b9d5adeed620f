#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "setdepth/decompose.hpp"
#include "setdepth/simulate.hpp"
#include "test_util.hpp"

using namespace setdepth;
using namespace setdepth::testutil;

namespace {

DecompositionConfig comp_cfg(int min_px = 1, bool drop_border = true) {
  DecompositionConfig cfg;
  cfg.mode = DecompositionConfig::Mode::components;
  cfg.min_component_px = min_px;
  cfg.drop_border = drop_border;
  cfg.component_grid = Grid{32, 32, 1.0};
  return cfg;
}

}  // namespace

TEST_CASE("component decomposition with filters") {
  const Grid g{60, 40, 1.0};
  BinaryRaster img(g);
  // a 3x3 blob and a 2x1 blob, both interior
  for (int y = 10; y < 13; ++y)
    for (int x = 10; x < 13; ++x) img.set(x, y, true);
  img.set(30, 20, true);
  img.set(31, 20, true);

  SECTION("small components fall below min_component_px") {
    const auto res = decompose_components(img, comp_cfg(3));
    REQUIRE(res.set.components.size() == 1);
    REQUIRE(res.dropped_small == 1);
  }

  SECTION("a component exactly at the threshold is retained") {
    const auto res = decompose_components(img, comp_cfg(2));
    REQUIRE(res.set.components.size() == 2);
  }

  SECTION("two equal blobs give two identically centred masks") {
    BinaryRaster two(g);
    for (int y = 5; y < 8; ++y)
      for (int x = 5; x < 8; ++x) {
        two.set(x, y, true);
        two.set(x + 20, y + 10, true);
      }
    const auto res = decompose_components(two, comp_cfg());
    REQUIRE(res.set.components.size() == 2);
    REQUIRE(res.set.components[0] == res.set.components[1]);
  }

  SECTION("border-touching components are counted and dropped") {
    BinaryRaster touching = img;
    touching.set(0, 5, true);
    const auto res = decompose_components(touching, comp_cfg());
    REQUIRE(res.dropped_border == 1);
    REQUIRE(res.set.components.size() == 2);
    const auto kept = decompose_components(touching, comp_cfg(1, false));
    REQUIRE(kept.set.components.size() == 3);
  }

  SECTION("oversized components grow the grid and flag the upscale") {
    BinaryRaster wide(g);
    for (int x = 5; x < 55; ++x) wide.set(x, 20, true);
    const auto res = decompose_components(wide, comp_cfg());
    REQUIRE(res.grid_upscaled);
    REQUIRE(res.set.components.size() == 1);
    REQUIRE(res.set.components[0].width() > 32);
    REQUIRE(res.set.components[0].count() == 50);
  }
}

TEST_CASE("closest-hole decomposition") {
  DecompositionConfig cfg;
  cfg.mode = DecompositionConfig::Mode::closest_hole;
  cfg.component_grid = Grid{48, 48, 1.0};
  cfg.drop_border = true;

  SECTION("an annulus maps to one output set, the whole annulus") {
    const Grid g{32, 32, 1.0};
    const BinaryRaster ann = probe_annulus(g, 8.0, 3.0);
    const auto res = decompose_closest_hole(ann, cfg);
    REQUIRE(res.set.components.size() == 1);
    REQUIRE(res.hole_free[0] == false);
    REQUIRE(res.set.components[0].count() == ann.count());
  }

  SECTION("two disjoint annuli map to two sets") {
    const Grid g{64, 32, 1.0};
    BinaryRaster img(g);
    auto put_annulus = [&](double cx) {
      for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 64; ++x) {
          const double dx = x + 0.5 - cx, dy = y + 0.5 - 16.0;
          const double d2 = dx * dx + dy * dy;
          if (d2 <= 36.0 && d2 >= 4.0) img.set(x, y, true);
        }
    };
    put_annulus(16.0);
    put_annulus(48.0);
    const auto res = decompose_closest_hole(img, cfg);
    REQUIRE(res.set.components.size() == 2);
  }

  SECTION("hole-free components pass through whole and are flagged") {
    const Grid g{32, 32, 1.0};
    const BinaryRaster disc = probe_disc(g, 6.0);
    const auto res = decompose_closest_hole(disc, cfg);
    REQUIRE(res.set.components.size() == 1);
    REQUIRE(res.hole_free[0] == true);
  }

  SECTION("an eight-shaped blob splits along the closest-hole rule") {
    const Grid g{40, 70, 1.0};
    BinaryRaster img(g);
    // two overlapping rings forming one blob with holes at (20, 20), (20, 40)
    auto ring = [&](double cy) {
      for (int y = 0; y < 70; ++y)
        for (int x = 0; x < 40; ++x) {
          const double dx = x + 0.5 - 20.0, dy = y + 0.5 - cy;
          const double d2 = dx * dx + dy * dy;
          if (d2 <= 169.0 && d2 >= 36.0) img.set(x, y, true);
        }
    };
    ring(20.0);
    ring(40.0);
    REQUIRE(connected_components(img, 8, false).components.size() == 1);
    const auto res = decompose_closest_hole(img, cfg);
    REQUIRE(res.set.components.size() == 2);

    // Brute-force oracle: assign each pixel of the blob to the nearer hole.
    std::vector<std::vector<std::pair<int, int>>> hole_px(2);
    const BinaryRaster inv = complement(img);
    // hole pixels: inside either ring interior
    for (int y = 0; y < 70; ++y)
      for (int x = 0; x < 40; ++x) {
        if (!inv.get(x, y)) continue;
        const double d0 = std::hypot(x + 0.5 - 20.0, y + 0.5 - 20.0);
        const double d1 = std::hypot(x + 0.5 - 20.0, y + 0.5 - 40.0);
        if (d0 < 6.0) hole_px[0].push_back({x, y});
        if (d1 < 6.0) hole_px[1].push_back({x, y});
      }
    std::size_t expect[2] = {0, 0};
    for (int y = 0; y < 70; ++y)
      for (int x = 0; x < 40; ++x) {
        if (!img.get(x, y)) continue;
        double best[2];
        for (int h = 0; h < 2; ++h) {
          double b = std::numeric_limits<double>::max();
          for (auto [hx, hy] : hole_px[h]) {
            const double dx = x - hx, dy = y - hy;
            b = std::min(b, dx * dx + dy * dy);
          }
          best[h] = b;
        }
        ++expect[best[0] <= best[1] ? 0 : 1];  // ties to the lower label
      }
    std::size_t got[2] = {res.set.components[0].count(), res.set.components[1].count()};
    REQUIRE(got[0] + got[1] == img.count());  // exact partition
    REQUIRE(((got[0] == expect[0] && got[1] == expect[1]) ||
             (got[0] == expect[1] && got[1] == expect[0])));
  }

  SECTION("foreground 8-connectivity pairs with background 4-connectivity") {
    // a diagonal checkerboard square: under fg-8 it is one component whose
    // complement interior cells are 4-separated from the outside
    const Grid g{9, 9, 1.0};
    BinaryRaster img(g);
    for (int y = 2; y < 7; ++y)
      for (int x = 2; x < 7; ++x)
        if ((x + y) % 2 == 0) img.set(x, y, true);
    const auto res = decompose_closest_hole(img, cfg);
    // all pieces remain foreground pixels and partition the blob
    std::size_t total = 0;
    for (const auto& c : res.set.components) total += c.count();
    REQUIRE(total == img.count());
  }
}
