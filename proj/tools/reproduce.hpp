#pragma once

// The `reproduce` subcommand: desk-scale versions of the canned experiments,
// emitting CSV/SVG/JSON artefacts plus a manifest of seeds and settings.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "setdepth/experiments.hpp"
#include "setdepth/io.hpp"
#include "setdepth/setdepth.hpp"

namespace repro {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace setdepth;
namespace ex = setdepth::experiments;

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline int reproduce_table1(const fs::path& dir, int seeds, std::uint64_t base_seed,
                            int threads) {
  fs::create_directories(dir);
  std::string flags_csv = "seed";
  for (int p = 0; p < ex::kProbeCount; ++p)
    for (int d = 0; d < ex::kDepthCount; ++d)
      flags_csv += std::string(",") + ex::kProbeNames[p] + ":" + ex::kTableDepthNames[d];
  flags_csv += "\n";

  int pattern_matches = 0;
  for (int s = 0; s < seeds; ++s) {
    const std::uint64_t seed = base_seed + 100 * static_cast<std::uint64_t>(s);
    const ex::OutlierTableRun run = ex::run_outlier_table(seed, threads);
    if (ex::band_simplicial_pattern_matches(run)) ++pattern_matches;

    std::string values_csv = "probe";
    for (int d = 0; d < ex::kDepthCount; ++d)
      values_csv += std::string(",") + ex::kTableDepthNames[d];
    values_csv += "\n";
    std::string flag_row = std::to_string(seed);
    for (int p = 0; p < ex::kProbeCount; ++p) {
      values_csv += ex::kProbeNames[p];
      for (int d = 0; d < ex::kDepthCount; ++d) {
        values_csv += "," + format_g17(run.values[p][d]);
        flag_row += run.flagged[p][d] ? ",+" : ",-";
      }
      values_csv += "\n";
    }
    flags_csv += flag_row + "\n";
    char name[64];
    std::snprintf(name, sizeof name, "depths_seed%02d.csv", s);
    write_text(dir / name, values_csv);
  }
  write_text(dir / "flags.csv", flags_csv);

  ordered_json manifest;
  manifest["experiment"] = "table1";
  manifest["seeds"] = seeds;
  manifest["base_seed"] = base_seed;
  manifest["band_simplicial_pattern_matches"] = pattern_matches;
  manifest["grid"] = {{"width", 100}, {"height", 100}, {"pixel_size", 1.0}};
  manifest["disc_law"] = {{"count", 100}, {"r_lo", 2.0}, {"r_hi", 4.0}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  std::printf("table1: band+simplicial pattern matched in %d/%d seeds\n", pattern_matches,
              seeds);
  return 0;
}

inline int reproduce_particle_ddplots(const fs::path& dir, std::uint64_t base_seed,
                                      int threads) {
  fs::create_directories(dir);
  const Grid grid{128, 128, 0.5};
  ParticleModelParams m1{3.0, 0.5, 9.0, 1.5, 5.0, 3.0, grid};
  ParticleModelParams m2{12.0, 1.5, 5.0, 3.0, 3.0, 0.5, grid};
  ParticleModelParams m3{9.0, 2.5, 5.0, 3.0, 3.0, 0.5, grid};

  DepthConfig cfg;
  cfg.kind = DepthKind::band;
  cfg.n = 3;
  cfg.s = 1000;
  cfg.seed = base_seed + 7;

  const SetSample m1a = gen_particle_sample(m1, 100, base_seed + 1);
  const SetSample m1b = gen_particle_sample(m1, 100, base_seed + 2);
  const SetSample m1c = gen_particle_sample(m1, 100, base_seed + 3);
  const SetSample m1d = gen_particle_sample(m1, 100, base_seed + 4);
  const SetSample s2 = gen_particle_sample(m2, 100, base_seed + 5);
  const SetSample s3 = gen_particle_sample(m3, 100, base_seed + 6);

  struct Pair {
    const char* name;
    const SetSample* x;
    const SetSample* y;
  } pairs[] = {{"model1_vs_model1", &m1a, &m1b},
               {"model1_vs_model2", &m1c, &s2},
               {"model1_vs_model3", &m1d, &s3}};
  for (const auto& pr : pairs) {
    const DDPlot plot = compute_ddplot(*pr.x, *pr.y, cfg, threads);
    export_ddplot_csv(plot, dir / (std::string(pr.name) + ".csv"));
    export_ddplot_svg(plot, dir / (std::string(pr.name) + ".svg"));
  }

  ordered_json manifest;
  manifest["experiment"] = "particle-ddplots";
  manifest["base_seed"] = base_seed;
  manifest["model1"] = {3.0, 0.5, 9.0, 1.5, 5.0, 3.0};
  manifest["model2"] = {12.0, 1.5, 5.0, 3.0, 3.0, 0.5};
  manifest["model3"] = {9.0, 2.5, 5.0, 3.0, 3.0, 0.5};
  manifest["parameter_order"] = {"mu_R", "sigma_R", "d", "lambda", "mu_r", "sigma_r"};
  manifest["depth"] = "band";
  manifest["n"] = cfg.n;
  manifest["s"] = cfg.s;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  std::printf("particle-ddplots: wrote 3 DD-plots under %s\n", dir.string().c_str());
  return 0;
}

inline int reproduce_mixture(const fs::path& dir, int runs, std::uint64_t base_seed,
                             int threads) {
  fs::create_directories(dir);
  const ex::MixtureConfig cfg;
  std::string csv =
      "run,seed,reg_beta0,reg_beta1,reg_p0,reg_p1,reg_p_adjusted,env_p,env_rejected,"
      "responsible_count,annulus_responsible\n";
  int reg_nonreject = 0, env_reject = 0, ann_ok = 0;
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t seed = base_seed + 1000 * static_cast<std::uint64_t>(r);
    const ex::MixtureRun run = ex::run_mixture(seed, cfg, threads);
    if (run.regression.p_adjusted > 0.05) ++reg_nonreject;
    if (run.envelope.p_value <= 0.05) ++env_reject;
    if (run.annulus_responsible) ++ann_ok;
    char row[256];
    std::snprintf(row, sizeof row, "%d,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%zu,%d\n", r,
                  static_cast<unsigned long long>(seed), run.regression.beta0,
                  run.regression.beta1, run.regression.p0, run.regression.p1,
                  run.regression.p_adjusted, run.envelope.p_value,
                  run.envelope.rejected ? 1 : 0, run.envelope.responsible.size(),
                  run.annulus_responsible ? 1 : 0);
    csv += row;
  }
  write_text(dir / "pvalues.csv", csv);

  ordered_json manifest;
  manifest["experiment"] = "mixture";
  manifest["runs"] = runs;
  manifest["base_seed"] = base_seed;
  manifest["sample_size"] = cfg.sample_size;
  manifest["p_annulus"] = cfg.p_annulus;
  manifest["regression"] = {{"depth", "band"}, {"n", cfg.reg_band_n}, {"s", cfg.reg_band_s},
                            {"bootstrap", cfg.regression_bootstrap}};
  manifest["envelope"] = {{"depth", "band"},
                          {"n", cfg.env_band_n},
                          {"s", cfg.env_band_s},
                          {"permutations", cfg.env_permutations},
                          {"alpha", cfg.alpha}};
  manifest["regression_nonrejections"] = reg_nonreject;
  manifest["envelope_rejections"] = env_reject;
  manifest["annulus_responsible_runs"] = ann_ok;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  std::printf("mixture: %d/%d regression non-rejections, %d/%d envelope rejections, "
              "%d with annulus responsible\n",
              reg_nonreject, runs, env_reject, runs, ann_ok);
  return 0;
}

// A power-study "model" is either a built-in Boolean model or dir:<path>
// pointing to a sample directory of externally simulated realisations.
struct PowerSource {
  std::string name;
  bool external = false;
  ex::PowerModel model = ex::PowerModel::boolean_disc;
  fs::path dir;
};

inline PowerSource parse_power_source(const std::string& spec) {
  PowerSource src;
  src.name = spec;
  if (spec.rfind("dir:", 0) == 0) {
    src.external = true;
    src.dir = spec.substr(4);
  } else if (spec == "boolean-disc") {
    src.model = ex::PowerModel::boolean_disc;
  } else if (spec == "boolean-ellipse") {
    src.model = ex::PowerModel::boolean_ellipse;
  } else {
    throw std::invalid_argument("unknown power-study model '" + spec + "'");
  }
  return src;
}

inline BinaryRaster power_realisation(const PowerSource& src, int index, std::uint64_t seed,
                                      const SetSample* external) {
  if (src.external) {
    if (!external || external->size() == 0)
      throw std::runtime_error("external realisation directory is empty: " + src.dir.string());
    return external->sets[static_cast<std::size_t>(index) % external->size()];
  }
  return gen_boolean_realisation(ex::power_model_params(src.model), seed);
}

inline int reproduce_power_study(const fs::path& dir, const std::vector<std::string>& models,
                                 int pairs, int permutations, std::uint64_t base_seed,
                                 int threads) {
  if (models.size() < 2)
    throw std::invalid_argument("power-study needs at least two --models entries");
  fs::create_directories(dir);
  std::vector<PowerSource> sources;
  std::vector<SetSample> external;
  for (const auto& m : models) sources.push_back(parse_power_source(m));
  for (auto& src : sources)
    external.push_back(src.external ? load_sample(src.dir) : SetSample(Grid{1, 1, 1.0}));

  std::string csv = "model_x,model_y,pair,band_p,sdf_p,components_x,components_y\n";
  std::string summary = "model_x,model_y,depth,pairs,rejections,rate\n";
  for (std::size_t a = 0; a < sources.size(); ++a)
    for (std::size_t b = a + 1; b < sources.size(); ++b) {
      int band_rej = 0, sdf_rej = 0;
      for (int p = 0; p < pairs; ++p) {
        const std::uint64_t seed =
            base_seed + 10000 * static_cast<std::uint64_t>(a * sources.size() + b) +
            static_cast<std::uint64_t>(p) * 2;
        const BinaryRaster img_x = power_realisation(sources[a], p, seed + 1, &external[a]);
        const BinaryRaster img_y = power_realisation(sources[b], p, seed + 2, &external[b]);
        const Grid base{100, 100, img_x.pixel_size()};
        SetSample sx = ex::realisation_components(img_x, base);
        SetSample sy = ex::realisation_components(img_y, base);
        ex::regrid_pair(sx, sy);

        DepthConfig band;
        band.kind = DepthKind::band;
        band.n = static_cast<int>(std::min<std::size_t>(8, std::min(sx.size(), sy.size())));
        band.s = 1000;
        band.seed = seed + 3;
        const double band_p =
            envelope_test(sx, sy, band, permutations, 0.05, seed + 5, threads).p_value;
        DepthConfig sdf;
        sdf.kind = DepthKind::signed_distance;
        sdf.fd_order = 2;
        sdf.seed = seed + 3;
        const double sdf_p =
            envelope_test(sx, sy, sdf, permutations, 0.05, seed + 5, threads).p_value;
        if (band_p <= 0.05) ++band_rej;
        if (sdf_p <= 0.05) ++sdf_rej;
        char row[256];
        std::snprintf(row, sizeof row, "%s,%s,%d,%.6f,%.6f,%zu,%zu\n",
                      sources[a].name.c_str(), sources[b].name.c_str(), p, band_p, sdf_p,
                      sx.size(), sy.size());
        csv += row;
      }
      char s1[160], s2[160];
      std::snprintf(s1, sizeof s1, "%s,%s,band,%d,%d,%.3f\n", sources[a].name.c_str(),
                    sources[b].name.c_str(), pairs, band_rej,
                    static_cast<double>(band_rej) / pairs);
      std::snprintf(s2, sizeof s2, "%s,%s,signed_distance_2,%d,%d,%.3f\n",
                    sources[a].name.c_str(), sources[b].name.c_str(), pairs, sdf_rej,
                    static_cast<double>(sdf_rej) / pairs);
      summary += s1;
      summary += s2;
      std::printf("%s vs %s: band %d/%d, signed-distance %d/%d\n", sources[a].name.c_str(),
                  sources[b].name.c_str(), band_rej, pairs, sdf_rej, pairs);
    }
  write_text(dir / "pvalues.csv", csv);
  write_text(dir / "rejection_rates.csv", summary);

  ordered_json manifest;
  manifest["experiment"] = "power-study";
  manifest["models"] = models;
  manifest["pairs"] = pairs;
  manifest["permutations"] = permutations;
  manifest["base_seed"] = base_seed;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

}  // namespace repro

inline int run_reproduce(const std::string& name, const std::string& out, int seeds, int runs,
                         int pairs, int perms, const std::vector<std::string>& models,
                         std::uint64_t seed, int threads) {
  if (name == "table1") return repro::reproduce_table1(out, seeds, seed, threads);
  if (name == "particle-ddplots") return repro::reproduce_particle_ddplots(out, seed, threads);
  if (name == "mixture") return repro::reproduce_mixture(out, runs, seed, threads);
  if (name == "power-study")
    return repro::reproduce_power_study(out, models, pairs, perms, seed, threads);
  std::cerr << "unknown experiment '" << name << "'\n";
  return 2;
}
