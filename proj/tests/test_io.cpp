#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <png.h>

#include "setdepth/io.hpp"
#include "setdepth/rng.hpp"
#include "test_util.hpp"

using namespace setdepth;
using namespace setdepth::testutil;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("setdepth_io_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_grey_png(const fs::path& p, int w, int h, unsigned char value) {
  std::FILE* fp = std::fopen(p.string().c_str(), "wb");
  REQUIRE(fp != nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  REQUIRE(setjmp(png_jmpbuf(png)) == 0);
  png_init_io(png, fp);
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<unsigned char> row(static_cast<std::size_t>(w), value);
  for (int y = 0; y < h; ++y) png_write_row(png, row.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("pbm round trip is bit exact") {
  TempDir tmp;
  Rng rng(41);
  const Grid g{37, 22, 0.5};
  const BinaryRaster mask = random_mask(g, 0.4, rng);

  for (bool binary : {true, false}) {
    const fs::path p = tmp.path / (binary ? "mask_p4.pbm" : "mask_p1.pbm");
    store_pbm(mask, p, binary);
    store_pixel_size_sidecar(p, 0.5);
    const BinaryRaster back = load_pbm(p);
    REQUIRE(back == mask);
  }
}

TEST_CASE("pixel size sidecar defaults to one") {
  TempDir tmp;
  BinaryRaster mask(5, 5, 2.0);
  mask.set(2, 2, true);
  const fs::path p = tmp.path / "m.pbm";
  store_pbm(mask, p);
  REQUIRE(load_pbm(p).pixel_size() == 1.0);
  store_pixel_size_sidecar(p, 2.0);
  REQUIRE(load_pbm(p).pixel_size() == 2.0);
  REQUIRE(load_pbm(p) == mask);
}

TEST_CASE("png round trip and thresholding") {
  TempDir tmp;
  Rng rng(43);
  const Grid g{19, 13, 1.0};
  const BinaryRaster mask = random_mask(g, 0.5, rng);
  const fs::path p = tmp.path / "m.png";
  store_png(mask, p);
  REQUIRE(load_png(p) == mask);

  SECTION("all-white image is empty under the dark-foreground rule") {
    write_grey_png(tmp.path / "white.png", 7, 5, 255);
    REQUIRE(load_png(tmp.path / "white.png", ForegroundRule::dark).none());
    REQUIRE(load_png(tmp.path / "white.png", ForegroundRule::bright).full());
  }

  SECTION("mid grey falls off under the strict majority rule") {
    write_grey_png(tmp.path / "grey127.png", 4, 4, 127);
    write_grey_png(tmp.path / "grey128.png", 4, 4, 128);
    REQUIRE(load_png(tmp.path / "grey127.png", ForegroundRule::bright).none());
    REQUIRE(load_png(tmp.path / "grey128.png", ForegroundRule::dark).none());
  }
}

TEST_CASE("unreadable and unsupported files raise") {
  TempDir tmp;
  REQUIRE_THROWS_AS(load_pbm(tmp.path / "missing.pbm"), std::runtime_error);
  REQUIRE_THROWS_AS(load_mask(tmp.path / "m.tiff"), std::runtime_error);
  std::ofstream(tmp.path / "bad.pbm") << "P5\n3 3\n";
  REQUIRE_THROWS_AS(load_pbm(tmp.path / "bad.pbm"), std::runtime_error);
}

TEST_CASE("sample directory round trip") {
  TempDir tmp;
  Rng rng(47);
  const Grid g{15, 15, 0.25};
  SetSample sample(g);
  for (int i = 0; i < 6; ++i) sample.push_back(random_mask(g, 0.3, rng));
  const fs::path dir = tmp.path / "sample";
  save_sample(sample, dir);
  const SetSample back = load_sample(dir);
  REQUIRE(back.grid == sample.grid);
  REQUIRE(back.size() == sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    REQUIRE(back.sets[i] == sample.sets[i]);
    REQUIRE(back.ids[i] == sample.ids[i]);
  }
  REQUIRE_THROWS_AS(load_sample(tmp.path / "nonexistent"), std::runtime_error);
}
