#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "setdepth/depth.hpp"
#include "setdepth/sample.hpp"

namespace setdepth {

/// One point of a DD-plot: the depths of a set against the two samples, and
/// which sample it came from.
struct DDPoint {
  std::string set_id;
  int origin = 0;  // 0 = X, 1 = Y
  double depth_x = 0.0;
  double depth_y = 0.0;
};

struct DDPlot {
  std::vector<DDPoint> points;
  DepthConfig config;
};

/// Depths of every set of the joined sample (X first, then Y) against both
/// samples, under one configuration and seed. A set stays in its own
/// reference sample while evaluated.
inline DDPlot compute_ddplot(const SetSample& x, const SetSample& y, const DepthConfig& cfg,
                             int threads = 1) {
  x.require_same_grid(y, "compute_ddplot");
  if (x.size() == 0 || y.size() == 0)
    throw std::invalid_argument("compute_ddplot: empty sample");
  DepthEngine engine_x(x, cfg, threads);
  DepthEngine engine_y(y, cfg, threads);
  const SetSample joined = joined_sample(x, y);
  const std::vector<double> dx = engine_x.evaluate(joined);
  const std::vector<double> dy = engine_y.evaluate(joined);
  DDPlot plot;
  plot.config = cfg;
  plot.points.resize(joined.size());
  for (std::size_t k = 0; k < joined.size(); ++k) {
    plot.points[k].set_id = joined.ids[k];
    plot.points[k].origin = k < x.size() ? 0 : 1;
    plot.points[k].depth_x = dx[k];
    plot.points[k].depth_y = dy[k];
  }
  return plot;
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void export_ddplot_csv(const DDPlot& plot, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_ddplot_csv: cannot write " + path.string());
  out << "set_id,origin,depth_x,depth_y\n";
  for (const auto& p : plot.points)
    out << p.set_id << ',' << (p.origin == 0 ? 'X' : 'Y') << ',' << format_g17(p.depth_x) << ','
        << format_g17(p.depth_y) << "\n";
}

inline DDPlot import_ddplot_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_ddplot_csv: cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "set_id,origin,depth_x,depth_y")
    throw std::runtime_error("import_ddplot_csv: bad header in " + path.string());
  DDPlot plot;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, origin, sx, sy;
    if (!std::getline(ss, id, ',') || !std::getline(ss, origin, ',') ||
        !std::getline(ss, sx, ',') || !std::getline(ss, sy, ','))
      throw std::runtime_error("import_ddplot_csv: bad row '" + line + "'");
    DDPoint p;
    p.set_id = id;
    p.origin = origin == "X" ? 0 : 1;
    p.depth_x = std::stod(sx);
    p.depth_y = std::stod(sy);
    plot.points.push_back(std::move(p));
  }
  return plot;
}

/// Scatter with the identity line; X-sample points as crosses, Y-sample
/// points as circles. A convenience artefact, the CSV is the contract.
inline void export_ddplot_svg(const DDPlot& plot, const std::filesystem::path& path,
                              int size_px = 480) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_ddplot_svg: cannot write " + path.string());
  const double margin = 40.0;
  const double span = size_px - 2.0 * margin;
  auto sx = [&](double v) { return margin + v * span; };
  auto sy = [&](double v) { return size_px - margin - v * span; };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\""
      << size_px << "\" viewBox=\"0 0 " << size_px << " " << size_px << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << span
      << "\" height=\"" << span << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1) << "\" y2=\""
      << sy(1) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  for (const auto& p : plot.points) {
    if (p.origin == 0) {
      const double cx = sx(p.depth_x), cy = sy(p.depth_y);
      out << "<path d=\"M" << cx - 3 << " " << cy - 3 << "L" << cx + 3 << " " << cy + 3 << "M"
          << cx - 3 << " " << cy + 3 << "L" << cx + 3 << " " << cy - 3
          << "\" stroke=\"#1f3a93\" stroke-width=\"1.2\"/>\n";
    } else {
      out << "<circle cx=\"" << sx(p.depth_x) << "\" cy=\"" << sy(p.depth_y)
          << "\" r=\"2.5\" fill=\"none\" stroke=\"#3c88c8\"/>\n";
    }
  }
  out << "<text x=\"" << size_px / 2 << "\" y=\"" << size_px - 10
      << "\" text-anchor=\"middle\" font-size=\"12\">depth in sample X</text>\n";
  out << "<text x=\"14\" y=\"" << size_px / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
      << size_px / 2 << ")\">depth in sample Y</text>\n";
  out << "</svg>\n";
}

}  // namespace setdepth
