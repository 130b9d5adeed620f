#pragma once

// Canned experiment drivers shared by the command-line tool and the
// acceptance suite: the probe-shape outlier table, the disc/annulus mixture
// comparison, and the Boolean-model power study.

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "setdepth/components.hpp"
#include "setdepth/ddplot.hpp"
#include "setdepth/decompose.hpp"
#include "setdepth/depth.hpp"
#include "setdepth/envelope.hpp"
#include "setdepth/regression.hpp"
#include "setdepth/simulate.hpp"

namespace setdepth::experiments {

// ---------------------------------------------------------------------------
// Probe-shape outlier table: a sample of 100 discs with radii U[2,4] on a
// 100x100 grid, seven probe shapes, seven depth families.

inline constexpr int kProbeCount = 7;
inline constexpr int kDepthCount = 7;

inline const std::array<const char*, kProbeCount> kProbeNames = {
    "ellipse", "square", "annulus", "holed_disc", "attached_satellites",
    "disjoint_satellite", "two_disc_union"};

inline const std::array<const char*, kDepthCount> kTableDepthNames = {
    "infimal", "signed_distance_2", "band", "simplicial", "expectation", "hausdorff",
    "lebesgue"};

struct OutlierTableRun {
  // values[p][d]: depth of probe p within the disc sample under depth d
  std::array<std::array<double, kDepthCount>, kProbeCount> values{};
  std::array<std::array<bool, kDepthCount>, kProbeCount> flagged{};
};

/// The seven probe shapes at the reference dimensions. Free placement
/// parameters are fixed here: satellites sit on the main boundary circle,
/// the disjoint satellite sits 30 length units out (far enough to register
/// on the distance-based depths), and the two-disc union overlaps at offset
/// 3.5 so its span exceeds every sample disc.
inline SetSample make_probe_shapes(const Grid& g, std::uint64_t seed) {
  SetSample probes(g);
  probes.push_back(probe_ellipse(g, 3.8, 2.2), kProbeNames[0]);
  probes.push_back(probe_square(g, 5.0), kProbeNames[1]);
  probes.push_back(probe_annulus(g, 3.0, 0.8), kProbeNames[2]);
  probes.push_back(probe_disc_with_random_holes(g, 3.0, 0.5, seed + 1), kProbeNames[3]);
  probes.push_back(probe_disc_plus_satellites(g, 2.5, 0.5, 2, seed + 2), kProbeNames[4]);
  probes.push_back(probe_disc_union(g, 3.0, 0.3, 30.0), kProbeNames[5]);
  probes.push_back(probe_disc_union(g, 2.8, 1.5, 3.5), kProbeNames[6]);
  return probes;
}

inline std::array<DepthConfig, kDepthCount> table_depth_configs(std::uint64_t seed) {
  std::array<DepthConfig, kDepthCount> cfgs;
  cfgs[0].kind = DepthKind::infimal;
  cfgs[1].kind = DepthKind::signed_distance;
  cfgs[1].fd_order = 2;
  cfgs[2].kind = DepthKind::band;
  cfgs[2].n = 3;
  cfgs[2].s = 1000;
  cfgs[3].kind = DepthKind::simplicial;
  cfgs[3].m = 3;
  cfgs[3].s = 1000;
  cfgs[3].weight_grid = 5;
  cfgs[4].kind = DepthKind::expectation;
  cfgs[4].max_m = 10;
  cfgs[4].expectation_resamples = 20;
  cfgs[5].kind = DepthKind::hausdorff_typeB;
  cfgs[6].kind = DepthKind::lebesgue_typeB;
  for (int d = 0; d < kDepthCount; ++d) cfgs[d].seed = seed + 10 + d;
  return cfgs;
}

inline OutlierTableRun run_outlier_table(std::uint64_t seed, int threads = 0) {
  const Grid g{100, 100, 1.0};
  const SetSample discs = gen_disc_sample(100, 2.0, 4.0, g, seed);
  const SetSample probes = make_probe_shapes(g, seed);
  const auto cfgs = table_depth_configs(seed);
  OutlierTableRun run;
  for (int d = 0; d < kDepthCount; ++d) {
    const std::vector<double> vals = probe_depths(discs, probes, cfgs[d], threads);
    for (int p = 0; p < kProbeCount; ++p) {
      run.values[p][d] = vals[p];
      run.flagged[p][d] = vals[p] < kOutlierThreshold;
    }
  }
  return run;
}

/// Flag pattern reported for the band and simplicial columns: the four
/// probes with broken sandwich structure (annulus, holed disc, disjoint
/// satellite, two-disc union) are outliers, the three boundary-deformation
/// probes are not.
inline bool band_simplicial_pattern_matches(const OutlierTableRun& run) {
  const std::array<bool, kProbeCount> expected = {false, false, true, true,
                                                  false, true,  true};
  for (int d : {2, 3})
    for (int p = 0; p < kProbeCount; ++p)
      if (run.flagged[p][d] != expected[p]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Disc sample vs disc/annulus mixture.

struct MixtureRun {
  RegressionTestResult regression;
  EnvelopeTestResult envelope;
  std::vector<std::size_t> annulus_indices;  // indices within the mixture sample
  std::size_t x_size = 0;
  bool annulus_responsible = false;
};

struct MixtureConfig {
  Grid grid{64, 64, 1.0};
  int sample_size = 100;
  double p_annulus = 0.2;
  int regression_bootstrap = 1000;
  long long reg_band_s = 500;
  int reg_band_n = 3;
  int env_band_n = 8;
  long long env_band_s = 1000;
  int env_permutations = 199;
  double alpha = 0.05;
};

inline MixtureRun run_mixture(std::uint64_t seed, const MixtureConfig& cfg = {},
                              int threads = 0) {
  const SetSample x = gen_disc_sample(cfg.sample_size, 8.0, 10.0, cfg.grid, seed * 2 + 1);
  const MixtureSample mix =
      gen_mixture_disc_annulus(cfg.sample_size, cfg.p_annulus, cfg.grid, seed * 2 + 2);

  MixtureRun run;
  run.annulus_indices = mix.annulus_indices;
  run.x_size = x.size();

  DepthConfig reg_cfg;
  reg_cfg.kind = DepthKind::band;
  reg_cfg.n = cfg.reg_band_n;
  reg_cfg.s = cfg.reg_band_s;
  reg_cfg.seed = seed + 11;
  const DDPlot dd = compute_ddplot(x, mix.sample, reg_cfg, threads);
  run.regression = regression_test(dd, cfg.regression_bootstrap, seed + 13, threads);

  DepthConfig env_cfg;
  env_cfg.kind = DepthKind::band;
  env_cfg.n = cfg.env_band_n;
  env_cfg.s = cfg.env_band_s;
  env_cfg.seed = seed + 17;
  run.envelope =
      envelope_test(x, mix.sample, env_cfg, cfg.env_permutations, cfg.alpha, seed + 19, threads);
  for (std::size_t k : run.envelope.responsible)
    for (std::size_t a : run.annulus_indices)
      if (k == x.size() + a) run.annulus_responsible = true;
  return run;
}

// ---------------------------------------------------------------------------
// Boolean-model power study on connected components.

enum class PowerModel { boolean_disc, boolean_ellipse };

inline const char* power_model_name(PowerModel m) {
  return m == PowerModel::boolean_disc ? "boolean-disc" : "boolean-ellipse";
}

inline BooleanModelParams power_model_params(PowerModel m) {
  BooleanModelParams p;  // 25 x 25 window on 400 x 400 pixels, intensity 0.4
  if (m == PowerModel::boolean_ellipse) p.grain = BooleanModelParams::GrainKind::ellipse;
  return p;
}

/// Connected components of one realisation, border-touching ones removed,
/// centred by mass on a shared grid.
inline SetSample realisation_components(const BinaryRaster& img, const Grid& component_grid) {
  DecompositionConfig dc;
  dc.mode = DecompositionConfig::Mode::components;
  dc.connectivity = 8;
  dc.drop_border = true;
  dc.component_grid = component_grid;
  DecompositionResult res = decompose_components(img, dc);
  if (res.set.components.empty())
    throw std::runtime_error("realisation_components: no interior components");
  SetSample s(res.set.components[0].grid());
  for (auto& c : res.set.components) s.push_back(std::move(c));
  return s;
}

inline void regrid_pair(SetSample& a, SetSample& b) {
  const Grid common{std::max(a.grid.width, b.grid.width),
                    std::max(a.grid.height, b.grid.height), a.grid.pixel_size};
  for (SetSample* s : {&a, &b}) {
    if (s->grid == common) continue;
    SetSample out(common);
    for (std::size_t i = 0; i < s->size(); ++i)
      out.push_back(centroid_centre(s->sets[i], common), s->ids[i]);
    *s = std::move(out);
  }
}

struct PowerPairRun {
  double band_p = 1.0;
  double sdf_p = 1.0;
  std::size_t components_x = 0;
  std::size_t components_y = 0;
};

inline PowerPairRun run_power_pair(PowerModel mx, PowerModel my, std::uint64_t seed,
                                   int permutations = 49, int threads = 0) {
  const BinaryRaster img_x = gen_boolean_realisation(power_model_params(mx), seed * 2 + 1);
  const BinaryRaster img_y = gen_boolean_realisation(power_model_params(my), seed * 2 + 2);
  const Grid base{100, 100, power_model_params(mx).window.pixel_size};
  SetSample sx = realisation_components(img_x, base);
  SetSample sy = realisation_components(img_y, base);
  regrid_pair(sx, sy);

  PowerPairRun run;
  run.components_x = sx.size();
  run.components_y = sy.size();

  DepthConfig band;
  band.kind = DepthKind::band;
  band.n = static_cast<int>(std::min<std::size_t>(8, std::min(sx.size(), sy.size())));
  band.s = 1000;
  band.seed = seed + 3;
  run.band_p = envelope_test(sx, sy, band, permutations, 0.05, seed + 5, threads).p_value;

  DepthConfig sdf;
  sdf.kind = DepthKind::signed_distance;
  sdf.fd_order = 2;
  sdf.seed = seed + 3;
  run.sdf_p = envelope_test(sx, sy, sdf, permutations, 0.05, seed + 5, threads).p_value;
  return run;
}

}  // namespace setdepth::experiments
