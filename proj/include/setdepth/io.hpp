#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include <json.hpp>

#include "setdepth/raster.hpp"
#include "setdepth/sample.hpp"

namespace setdepth {

namespace fs = std::filesystem;

/// Polarity rule for thresholding grey images: which side of 50% luminance
/// is the set. A pixel is foreground iff its foreground-ness is strictly
/// above 50%, so exact mid-grey is always off.
enum class ForegroundRule {
  bright,  // luminance > 50% is on
  dark     // luminance < 50% is on
};

// ---------------------------------------------------------------------------
// pixel_size sidecar: "<mask path>.json" holding {"pixel_size": <float>}.

inline double load_pixel_size_sidecar(const fs::path& mask_path, double fallback = 1.0) {
  const fs::path sidecar = mask_path.string() + ".json";
  if (!fs::exists(sidecar)) return fallback;
  std::ifstream in(sidecar);
  nlohmann::json j;
  in >> j;
  return j.value("pixel_size", fallback);
}

inline void store_pixel_size_sidecar(const fs::path& mask_path, double pixel_size) {
  std::ofstream out(mask_path.string() + ".json");
  out << "{\"pixel_size\": " << pixel_size << "}\n";
}

// ---------------------------------------------------------------------------
// PBM (P1 ascii / P4 binary). PBM bit 1 = black = on-pixel.

inline void store_pbm(const BinaryRaster& r, const fs::path& path, bool binary = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("store_pbm: cannot write " + path.string());
  if (binary) {
    out << "P4\n" << r.width() << " " << r.height() << "\n";
    const int bytes_per_row = (r.width() + 7) / 8;
    std::vector<unsigned char> rowbuf(bytes_per_row);
    for (int y = 0; y < r.height(); ++y) {
      std::fill(rowbuf.begin(), rowbuf.end(), 0);
      for (int x = 0; x < r.width(); ++x)
        if (r.get(x, y)) rowbuf[x >> 3] |= static_cast<unsigned char>(0x80u >> (x & 7));
      out.write(reinterpret_cast<const char*>(rowbuf.data()), bytes_per_row);
    }
  } else {
    out << "P1\n" << r.width() << " " << r.height() << "\n";
    for (int y = 0; y < r.height(); ++y) {
      for (int x = 0; x < r.width(); ++x) {
        out << (r.get(x, y) ? '1' : '0');
        out << (x + 1 == r.width() ? '\n' : ' ');
      }
    }
  }
}

inline BinaryRaster load_pbm(const fs::path& path, double pixel_size = 0.0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_pbm: cannot read " + path.string());
  auto next_token = [&in, &path]() -> std::string {
    std::string tok;
    for (;;) {
      int c = in.get();
      if (c == EOF) {
        if (tok.empty()) throw std::runtime_error("load_pbm: truncated file " + path.string());
        return tok;
      }
      if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
  };

  const std::string magic = next_token();
  if (magic != "P1" && magic != "P4")
    throw std::runtime_error("load_pbm: unsupported format " + magic + " in " + path.string());
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  const double ps = pixel_size > 0.0 ? pixel_size : load_pixel_size_sidecar(path);
  BinaryRaster r(w, h, ps);
  if (magic == "P1") {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const std::string tok = next_token();
        if (tok != "0" && tok != "1")
          throw std::runtime_error("load_pbm: bad P1 token '" + tok + "'");
        if (tok == "1") r.set(x, y, true);
      }
  } else {
    // P4: a single whitespace byte after the header, then packed rows.
    const int bytes_per_row = (w + 7) / 8;
    std::vector<unsigned char> rowbuf(bytes_per_row);
    for (int y = 0; y < h; ++y) {
      in.read(reinterpret_cast<char*>(rowbuf.data()), bytes_per_row);
      if (!in) throw std::runtime_error("load_pbm: truncated P4 data in " + path.string());
      for (int x = 0; x < w; ++x)
        if (rowbuf[x >> 3] & (0x80u >> (x & 7))) r.set(x, y, true);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// PNG via libpng. Reading thresholds BT.709 luminance at a strict 50%.

inline BinaryRaster load_png(const fs::path& path, ForegroundRule rule = ForegroundRule::bright,
                             double pixel_size = 0.0) {
  std::FILE* fp = std::fopen(path.string().c_str(), "rb");
  if (!fp) throw std::runtime_error("load_png: cannot read " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("load_png: libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("load_png: failed to decode " + path.string());
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  std::vector<unsigned char> row(static_cast<std::size_t>(w) * 3);

  const double ps = pixel_size > 0.0 ? pixel_size : load_pixel_size_sidecar(path);
  BinaryRaster r(w, h, ps);
  for (int y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (int x = 0; x < w; ++x) {
      const double lum = 0.2126 * row[3 * x] + 0.7152 * row[3 * x + 1] + 0.0722 * row[3 * x + 2];
      const bool on = rule == ForegroundRule::bright ? lum > 127.5 : lum < 127.5;
      if (on) r.set(x, y, true);
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return r;
}

inline void store_png(const BinaryRaster& r, const fs::path& path,
                      ForegroundRule rule = ForegroundRule::bright) {
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw std::runtime_error("store_png: cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("store_png: libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("store_png: failed to encode " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, r.width(), r.height(), 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const unsigned char on_value = rule == ForegroundRule::bright ? 255 : 0;
  std::vector<unsigned char> row(static_cast<std::size_t>(r.width()));
  for (int y = 0; y < r.height(); ++y) {
    for (int x = 0; x < r.width(); ++x)
      row[x] = r.get(x, y) ? on_value : static_cast<unsigned char>(255 - on_value);
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

/// Loads a mask by extension (.pbm or .png).
inline BinaryRaster load_mask(const fs::path& path, ForegroundRule rule = ForegroundRule::bright,
                              double pixel_size = 0.0) {
  const std::string ext = path.extension().string();
  if (ext == ".pbm") return load_pbm(path, pixel_size);
  if (ext == ".png") return load_png(path, rule, pixel_size);
  throw std::runtime_error("load_mask: unsupported format " + ext);
}

// ---------------------------------------------------------------------------
// SetSample directory: numbered mask files plus a sample.json manifest with
// the grid and the ordered file list.

inline void save_sample(const SetSample& sample, const fs::path& dir) {
  fs::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["width"] = sample.grid.width;
  manifest["height"] = sample.grid.height;
  manifest["pixel_size"] = sample.grid.pixel_size;
  std::vector<std::string> files;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.pbm", i);
    store_pbm(sample.sets[i], dir / name);
    files.emplace_back(name);
  }
  manifest["files"] = files;
  manifest["ids"] = sample.ids;
  std::ofstream out(dir / "sample.json");
  out << manifest.dump(2) << "\n";
}

inline SetSample load_sample(const fs::path& dir) {
  const fs::path manifest_path = dir / "sample.json";
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("load_sample: missing manifest " + manifest_path.string());
  nlohmann::json manifest;
  in >> manifest;
  Grid grid{manifest.at("width").get<int>(), manifest.at("height").get<int>(),
            manifest.at("pixel_size").get<double>()};
  grid.validate();
  SetSample sample(grid);
  const auto files = manifest.at("files").get<std::vector<std::string>>();
  std::vector<std::string> ids;
  if (manifest.contains("ids")) ids = manifest["ids"].get<std::vector<std::string>>();
  for (std::size_t i = 0; i < files.size(); ++i) {
    BinaryRaster mask = load_mask(dir / files[i], ForegroundRule::bright, grid.pixel_size);
    if (mask.width() != grid.width || mask.height() != grid.height)
      throw std::runtime_error("load_sample: " + files[i] + " does not match the manifest grid");
    sample.push_back(std::move(mask), i < ids.size() ? ids[i] : std::string{});
  }
  return sample;
}

}  // namespace setdepth
