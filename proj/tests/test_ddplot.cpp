#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "setdepth/ddplot.hpp"
#include "setdepth/simulate.hpp"
#include "test_util.hpp"

using namespace setdepth;
using namespace setdepth::testutil;
namespace fs = std::filesystem;

namespace {

DepthConfig band3(std::uint64_t seed = 11) {
  DepthConfig cfg;
  cfg.kind = DepthKind::band;
  cfg.n = 3;
  cfg.s = 200;
  cfg.seed = seed;
  return cfg;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("setdepth_dd_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("dd-plot of a sample against itself sits on the diagonal") {
  const Grid g{64, 64, 1.0};
  const SetSample x = gen_disc_sample(20, 2, 4, g, 5);
  const DDPlot plot = compute_ddplot(x, x, band3());
  REQUIRE(plot.points.size() == 40);
  for (const auto& p : plot.points) REQUIRE(p.depth_x == p.depth_y);
}

TEST_CASE("swapping the samples swaps coordinates and origins") {
  const Grid g{64, 64, 1.0};
  const SetSample x = gen_disc_sample(8, 2, 4, g, 5);
  const SetSample y = gen_disc_sample(12, 2, 3, g, 6);
  const DDPlot xy = compute_ddplot(x, y, band3());
  const DDPlot yx = compute_ddplot(y, x, band3());
  REQUIRE(xy.points.size() == yx.points.size());
  // The joined order is X..Y vs Y..X: match by identity of the set.
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(xy.points[i].depth_x == yx.points[y.size() + i].depth_y);
    REQUIRE(xy.points[i].depth_y == yx.points[y.size() + i].depth_x);
    REQUIRE(xy.points[i].origin == 0);
    REQUIRE(yx.points[y.size() + i].origin == 1);
  }
  for (std::size_t j = 0; j < y.size(); ++j) {
    REQUIRE(xy.points[x.size() + j].depth_x == yx.points[j].depth_y);
    REQUIRE(xy.points[x.size() + j].depth_y == yx.points[j].depth_x);
  }
}

TEST_CASE("annuli in a mixture have zero depth in the disc sample") {
  const Grid g{64, 64, 1.0};
  const SetSample x = gen_disc_sample(40, 8, 10, g, 7);
  const MixtureSample mix = gen_mixture_disc_annulus(40, 0.25, g, 8);
  const DDPlot plot = compute_ddplot(x, mix.sample, band3());
  REQUIRE(!mix.annulus_indices.empty());
  for (std::size_t idx : mix.annulus_indices) {
    const auto& p = plot.points[x.size() + idx];
    REQUIRE(p.depth_x == 0.0);
    REQUIRE(p.origin == 1);
  }
}

TEST_CASE("dd-plot input validation") {
  const Grid g{64, 64, 1.0};
  const SetSample x = gen_disc_sample(5, 2, 4, g, 5);
  SetSample empty(g);
  REQUIRE_THROWS_AS(compute_ddplot(x, empty, band3()), std::invalid_argument);
  const SetSample other = gen_disc_sample(5, 2, 4, Grid{32, 32, 1.0}, 5);
  REQUIRE_THROWS_AS(compute_ddplot(x, other, band3()), std::invalid_argument);
}

TEST_CASE("dd-plot csv export") {
  TempDir tmp;

  SECTION("empty plot writes the header only") {
    DDPlot plot;
    export_ddplot_csv(plot, tmp.path / "empty.csv");
    std::ifstream in(tmp.path / "empty.csv");
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "set_id,origin,depth_x,depth_y");
    REQUIRE_FALSE(std::getline(in, line));
  }

  SECTION("three points make four lines") {
    DDPlot plot;
    plot.points = {{"a", 0, 0.25, 0.5}, {"b", 0, 1.0 / 3.0, 0.125}, {"c", 1, 0.0, 1.0}};
    export_ddplot_csv(plot, tmp.path / "three.csv");
    std::ifstream in(tmp.path / "three.csv");
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    REQUIRE(lines == 4);
  }

  SECTION("round trip restores the points bit-exactly") {
    const Grid g{64, 64, 1.0};
    const SetSample x = gen_disc_sample(9, 2, 4, g, 5);
    const SetSample y = gen_disc_sample(7, 2, 4, g, 9);
    const DDPlot plot = compute_ddplot(x, y, band3());
    export_ddplot_csv(plot, tmp.path / "plot.csv");
    const DDPlot back = import_ddplot_csv(tmp.path / "plot.csv");
    REQUIRE(back.points.size() == plot.points.size());
    for (std::size_t i = 0; i < plot.points.size(); ++i) {
      REQUIRE(back.points[i].set_id == plot.points[i].set_id);
      REQUIRE(back.points[i].origin == plot.points[i].origin);
      REQUIRE(back.points[i].depth_x == plot.points[i].depth_x);
      REQUIRE(back.points[i].depth_y == plot.points[i].depth_y);
    }
  }

  SECTION("svg export writes a parsable document") {
    DDPlot plot;
    plot.points = {{"a", 0, 0.2, 0.3}, {"b", 1, 0.8, 0.9}};
    export_ddplot_svg(plot, tmp.path / "plot.svg");
    std::ifstream in(tmp.path / "plot.svg");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(all.find("<svg") != std::string::npos);
    REQUIRE(all.find("</svg>") != std::string::npos);
    REQUIRE(all.find("circle") != std::string::npos);
  }
}

TEST_CASE("independent samples from one disc law regress near the identity") {
  // Frozen regime check: the mean fitted slope over five fixed seeds sits in
  // the band established by calibration runs.
  const Grid g{64, 64, 1.0};
  DepthConfig cfg = band3(7);
  cfg.s = 500;
  double mean_slope = 0.0;
  const std::vector<std::uint64_t> seeds{101, 202, 303, 404, 505};
  for (std::uint64_t seed : seeds) {
    const SetSample x = gen_disc_sample(100, 2, 4, g, seed);
    const SetSample y = gen_disc_sample(100, 2, 4, g, seed + 57);
    const DDPlot plot = compute_ddplot(x, y, cfg, 2);
    double mx = 0, my = 0;
    for (const auto& p : plot.points) {
      mx += p.depth_x;
      my += p.depth_y;
    }
    mx /= plot.points.size();
    my /= plot.points.size();
    double sxx = 0, sxy = 0;
    for (const auto& p : plot.points) {
      sxx += (p.depth_x - mx) * (p.depth_x - mx);
      sxy += (p.depth_x - mx) * (p.depth_y - my);
    }
    mean_slope += sxy / sxx / seeds.size();
  }
  REQUIRE(mean_slope > 0.7);
  REQUIRE(mean_slope < 1.3);
}
