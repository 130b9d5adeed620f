#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "setdepth/raster.hpp"
#include "setdepth/rng.hpp"
#include "setdepth/sample.hpp"

namespace setdepth {

/// Shapes are anchored on the centre of the pixel nearest the grid centre,
/// so that point-like features (pin holes, tiny satellite grains) always own
/// at least one pixel. Rasterisation rule everywhere: a pixel is on iff its
/// centre lies inside the continuous shape.
inline std::pair<double, double> grid_anchor(const Grid& g) {
  return {(g.width / 2 + 0.5) * g.pixel_size, (g.height / 2 + 0.5) * g.pixel_size};
}

namespace detail {

inline void require_fits(const Grid& g, double cx, double cy, double extent, const char* what) {
  if (cx - extent < 0.0 || cy - extent < 0.0 || cx + extent > g.width * g.pixel_size ||
      cy + extent > g.height * g.pixel_size)
    throw std::invalid_argument(std::string(what) + ": shape does not fit the grid");
}

template <typename Inside>
inline void fill_shape(BinaryRaster& r, double cx, double cy, double extent, Inside&& inside) {
  const double ps = r.pixel_size();
  const int x0 = std::max(0, static_cast<int>(std::floor((cx - extent) / ps)) - 1);
  const int x1 = std::min(r.width() - 1, static_cast<int>(std::ceil((cx + extent) / ps)) + 1);
  const int y0 = std::max(0, static_cast<int>(std::floor((cy - extent) / ps)) - 1);
  const int y1 = std::min(r.height() - 1, static_cast<int>(std::ceil((cy + extent) / ps)) + 1);
  for (int y = y0; y <= y1; ++y) {
    const double py = (y + 0.5) * ps - cy;
    for (int x = x0; x <= x1; ++x) {
      const double px = (x + 0.5) * ps - cx;
      if (inside(px, py)) r.set(x, y, true);
    }
  }
}

inline void fill_disc(BinaryRaster& r, double cx, double cy, double radius) {
  fill_shape(r, cx, cy, radius,
             [=](double px, double py) { return px * px + py * py <= radius * radius; });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Probe shapes (all centred on the grid anchor).

inline BinaryRaster probe_disc(const Grid& g, double radius) {
  g.validate();
  BinaryRaster r(g);
  const auto [cx, cy] = grid_anchor(g);
  detail::require_fits(g, cx, cy, radius, "probe_disc");
  detail::fill_disc(r, cx, cy, radius);
  return r;
}

inline BinaryRaster probe_ellipse(const Grid& g, double semi_a, double semi_b) {
  g.validate();
  BinaryRaster r(g);
  const auto [cx, cy] = grid_anchor(g);
  detail::require_fits(g, cx, cy, std::max(semi_a, semi_b), "probe_ellipse");
  detail::fill_shape(r, cx, cy, std::max(semi_a, semi_b), [=](double px, double py) {
    const double u = px / semi_a, v = py / semi_b;
    return u * u + v * v <= 1.0;
  });
  return r;
}

inline BinaryRaster probe_square(const Grid& g, double side) {
  g.validate();
  BinaryRaster r(g);
  const auto [cx, cy] = grid_anchor(g);
  detail::require_fits(g, cx, cy, side / 2.0, "probe_square");
  detail::fill_shape(r, cx, cy, side / 2.0, [=](double px, double py) {
    return std::abs(px) <= side / 2.0 && std::abs(py) <= side / 2.0;
  });
  return r;
}

inline BinaryRaster probe_annulus(const Grid& g, double r_out, double r_in) {
  if (!(r_in < r_out)) throw std::invalid_argument("probe_annulus: need r_in < r_out");
  g.validate();
  BinaryRaster r(g);
  const auto [cx, cy] = grid_anchor(g);
  detail::require_fits(g, cx, cy, r_out, "probe_annulus");
  detail::fill_shape(r, cx, cy, r_out, [=](double px, double py) {
    const double d2 = px * px + py * py;
    return d2 <= r_out * r_out && d2 >= r_in * r_in;
  });
  return r;
}

/// Disc with pin holes: interior pixels (one-pixel erosion of the disc) are
/// dropped independently with probability drop_prob; the boundary ring is
/// kept intact so the silhouette stays a disc.
inline BinaryRaster probe_disc_with_random_holes(const Grid& g, double radius, double drop_prob,
                                                 std::uint64_t seed) {
  BinaryRaster r = probe_disc(g, radius);
  const BinaryRaster interior = erode(r, Neighbourhood::cross);
  Rng rng(seed);
  for (int y = 0; y < r.height(); ++y)
    for (int x = 0; x < r.width(); ++x)
      if (interior.get(x, y) && rng.bernoulli(drop_prob)) r.set(x, y, false);
  return r;
}

/// Disc with `count` satellite discs attached, their centres sitting on the
/// main boundary circle at seeded uniform angles.
inline BinaryRaster probe_disc_plus_satellites(const Grid& g, double r_main, double r_sat,
                                               int count, std::uint64_t seed) {
  BinaryRaster r = probe_disc(g, r_main);
  const auto [cx, cy] = grid_anchor(g);
  detail::require_fits(g, cx, cy, r_main + r_sat, "probe_disc_plus_satellites");
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    detail::fill_disc(r, cx + r_main * std::cos(theta), cy + r_main * std::sin(theta), r_sat);
  }
  return r;
}

/// Union of a disc of radius r1 at the anchor and a disc of radius r2 offset
/// by `offset` length units along +x.
inline BinaryRaster probe_disc_union(const Grid& g, double r1, double r2, double offset) {
  BinaryRaster r = probe_disc(g, r1);
  const auto [cx, cy] = grid_anchor(g);
  detail::require_fits(g, cx + offset, cy, r2, "probe_disc_union");
  detail::fill_disc(r, cx + offset, cy, r2);
  return r;
}

// ---------------------------------------------------------------------------
// Samples of random sets.

/// M centred discs with radii i.i.d. Uniform[lo, hi].
inline SetSample gen_disc_sample(int count, double lo, double hi, const Grid& g,
                                 std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("gen_disc_sample: negative count");
  if (!(lo <= hi)) throw std::invalid_argument("gen_disc_sample: need lo <= hi");
  SetSample sample(g);
  Rng root(seed);
  for (int i = 0; i < count; ++i) {
    Rng rng = root.derive(static_cast<std::uint64_t>(i));
    sample.push_back(probe_disc(g, rng.uniform(lo, hi)));
  }
  return sample;
}

/// Two-step random particle model: a main ball of radius
/// max{0, N(mu_R, sigma_R)}, plus Poisson(lambda)-many satellite balls with
/// centres drawn area-uniformly from the ring between radii R-d and R and
/// radii max{0, N(mu_r, sigma_r)}.
struct ParticleModelParams {
  double mu_R = 3.0;
  double sigma_R = 0.5;
  double d = 9.0;
  double lambda = 1.5;
  double mu_r = 5.0;
  double sigma_r = 3.0;
  Grid grid{128, 128, 0.5};
};

inline BinaryRaster gen_particle(const ParticleModelParams& p, std::uint64_t seed) {
  p.grid.validate();
  if (p.sigma_R < 0 || p.sigma_r < 0 || p.lambda < 0 || p.d < 0)
    throw std::invalid_argument("gen_particle: negative parameter");
  Rng rng(seed);
  const auto [cx, cy] = grid_anchor(p.grid);
  const double big_r = std::max(0.0, rng.normal(p.mu_R, p.sigma_R));
  BinaryRaster r(p.grid);
  detail::require_fits(p.grid, cx, cy, big_r, "gen_particle");
  detail::fill_disc(r, cx, cy, big_r);
  const long satellites = rng.poisson(p.lambda);
  const double r0 = std::max(0.0, big_r - p.d);
  for (long i = 0; i < satellites; ++i) {
    // Area-uniform radius on the ring, uniform angle.
    const double u = rng.uniform();
    const double rho = std::sqrt(r0 * r0 + u * (big_r * big_r - r0 * r0));
    const double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    const double rad = std::max(0.0, rng.normal(p.mu_r, p.sigma_r));
    const double sx = cx + rho * std::cos(theta);
    const double sy = cy + rho * std::sin(theta);
    detail::require_fits(p.grid, sx, sy, rad, "gen_particle");
    detail::fill_disc(r, sx, sy, rad);
  }
  return r;
}

inline SetSample gen_particle_sample(const ParticleModelParams& p, int count,
                                     std::uint64_t seed) {
  SetSample sample(p.grid);
  Rng root(seed);
  for (int i = 0; i < count; ++i) {
    Rng rng = root.derive(static_cast<std::uint64_t>(i));
    std::uint64_t child = rng.next();
    sample.push_back(gen_particle(p, child));
  }
  return sample;
}

/// Boolean model: Poisson germ count with the given intensity per unit area,
/// uniform germ positions in the window, i.i.d. grains (discs or ellipses
/// with uniform orientation), clipped to the window.
struct BooleanModelParams {
  Grid window{400, 400, 0.0625};  // a 25 x 25 unit window
  double intensity = 0.4;         // germ centres per unit area

  enum class GrainKind { disc, ellipse };
  GrainKind grain = GrainKind::disc;
  double r_min = 0.5, r_max = 1.0;  // disc radii
  double a_min = 0.5, a_max = 1.0;  // ellipse semi-major
  double b_min = 0.2, b_max = 0.7;  // ellipse semi-minor
};

inline BinaryRaster gen_boolean_realisation(const BooleanModelParams& p, std::uint64_t seed) {
  p.window.validate();
  if (!(p.intensity > 0.0)) throw std::invalid_argument("gen_boolean_realisation: intensity");
  if (!(p.r_min <= p.r_max) || !(p.a_min <= p.a_max) || !(p.b_min <= p.b_max))
    throw std::invalid_argument("gen_boolean_realisation: interval bounds out of order");
  Rng rng(seed);
  const double wx = p.window.width * p.window.pixel_size;
  const double wy = p.window.height * p.window.pixel_size;
  const long germs = rng.poisson(p.intensity * wx * wy);
  BinaryRaster r(p.window);
  constexpr double kPi = 3.14159265358979323846;
  for (long i = 0; i < germs; ++i) {
    const double cx = rng.uniform(0.0, wx);
    const double cy = rng.uniform(0.0, wy);
    if (p.grain == BooleanModelParams::GrainKind::disc) {
      const double rad = rng.uniform(p.r_min, p.r_max);
      detail::fill_disc(r, cx, cy, rad);
    } else {
      const double a = rng.uniform(p.a_min, p.a_max);
      const double b = rng.uniform(p.b_min, p.b_max);
      const double theta = rng.uniform(0.0, kPi);
      const double c = std::cos(theta), s = std::sin(theta);
      detail::fill_shape(r, cx, cy, std::max(a, b), [=](double px, double py) {
        const double u = (c * px + s * py) / a;
        const double v = (-s * px + c * py) / b;
        return u * u + v * v <= 1.0;
      });
    }
  }
  return r;
}

/// Disc / annulus mixture: with probability p_annulus the realisation is an
/// annulus (inner radius U[ann_in_lo, ann_in_hi], outer U[ann_out_lo,
/// ann_out_hi]), otherwise a disc with radius U[disc_lo, disc_hi].
struct MixtureSample {
  SetSample sample;
  std::vector<std::size_t> annulus_indices;
};

inline MixtureSample gen_mixture_disc_annulus(int count, double p_annulus, const Grid& g,
                                              std::uint64_t seed, double disc_lo = 8.0,
                                              double disc_hi = 10.0, double ann_in_lo = 2.0,
                                              double ann_in_hi = 4.0, double ann_out_lo = 8.0,
                                              double ann_out_hi = 10.0) {
  if (p_annulus < 0.0 || p_annulus > 1.0)
    throw std::invalid_argument("gen_mixture_disc_annulus: p_annulus out of [0,1]");
  MixtureSample out{SetSample(g), {}};
  Rng root(seed);
  for (int i = 0; i < count; ++i) {
    Rng rng = root.derive(static_cast<std::uint64_t>(i));
    if (rng.bernoulli(p_annulus)) {
      const double inner = rng.uniform(ann_in_lo, ann_in_hi);
      const double outer = rng.uniform(ann_out_lo, ann_out_hi);
      out.sample.push_back(probe_annulus(g, outer, inner));
      out.annulus_indices.push_back(static_cast<std::size_t>(i));
    } else {
      out.sample.push_back(probe_disc(g, rng.uniform(disc_lo, disc_hi)));
    }
  }
  return out;
}

}  // namespace setdepth
