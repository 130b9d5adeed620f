#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "setdepth/raster.hpp"

namespace setdepth {

/// An ordered collection of masks on one common grid: one statistical sample
/// of set realisations.
struct SetSample {
  Grid grid;
  std::vector<BinaryRaster> sets;
  std::vector<std::string> ids;  // parallel to sets; defaulted to indices

  SetSample() = default;

  explicit SetSample(const Grid& g) : grid(g) { g.validate(); }

  explicit SetSample(std::vector<BinaryRaster> members) {
    if (members.empty()) throw std::invalid_argument("SetSample: empty sample");
    grid = members[0].grid();
    for (const auto& m : members)
      if (m.grid() != grid) throw std::invalid_argument("SetSample: sets on different grids");
    sets = std::move(members);
    default_ids();
  }

  std::size_t size() const { return sets.size(); }

  void push_back(BinaryRaster r, std::string id = {}) {
    if (sets.empty() && grid.width == 0) grid = r.grid();
    if (r.grid() != grid) throw std::invalid_argument("SetSample: set on a different grid");
    sets.push_back(std::move(r));
    ids.push_back(id.empty() ? std::to_string(sets.size() - 1) : std::move(id));
  }

  void default_ids() {
    ids.resize(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) ids[i] = std::to_string(i);
  }

  void require_same_grid(const SetSample& other, const char* op) const {
    if (grid != other.grid)
      throw std::invalid_argument(std::string(op) + ": samples on different grids");
  }
};

/// Concatenation X then Y on a common grid.
inline SetSample joined_sample(const SetSample& x, const SetSample& y) {
  x.require_same_grid(y, "joined_sample");
  SetSample out(x.grid);
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x.sets[i], "x:" + x.ids[i]);
  for (std::size_t i = 0; i < y.size(); ++i) out.push_back(y.sets[i], "y:" + y.ids[i]);
  return out;
}

}  // namespace setdepth
