// setdepth command-line tool: simulation, decomposition, depths, DD-plots
// and two-sample tests for samples of planar random sets.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "setdepth/setdepth.hpp"
#include "setdepth/experiments.hpp"

#include "reproduce.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// CLI11 config reader for flat JSON files: {"flag": value, ...}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    input >> j;
    std::vector<CLI::ConfigItem> items;
    for (auto it = j.begin(); it != j.end(); ++it) {
      CLI::ConfigItem item;
      item.name = it.key();
      if (it.value().is_array()) {
        for (const auto& v : it.value())
          item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      } else {
        item.inputs.push_back(it.value().is_string() ? it.value().get<std::string>()
                                                     : it.value().dump());
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

struct DepthFlags {
  std::string kind = "band";
  int n = 3;
  long long s = 1000;
  int m = 3;
  int weight_grid = 5;
  int expectation_resamples = 20;
  int max_m = 10;
  int fd_order = 2;
  bool exact_inclusion = false;
  bool with_replacement = false;
};

void add_depth_flags(CLI::App* cmd, DepthFlags& df) {
  cmd->add_option("--depth", df.kind,
                  "depth family: infimal|band|signed_distance|hausdorff|lebesgue|"
                  "expectation|simplicial")
      ->capture_default_str();
  cmd->add_option("--n", df.n, "band subset size")->capture_default_str();
  cmd->add_option("--s", df.s, "replicate count for band/simplicial")->capture_default_str();
  cmd->add_option("--m", df.m, "tuple length for simplicial")->capture_default_str();
  cmd->add_option("--N", df.weight_grid, "weight grid resolution (weights k/N)")
      ->capture_default_str();
  cmd->add_option("--exp-resamples", df.expectation_resamples,
                  "resampled tuples per expectation bound")
      ->capture_default_str();
  cmd->add_option("--max-m", df.max_m, "expectation depth search cap")->capture_default_str();
  cmd->add_option("--fd-order", df.fd_order, "signed-distance depth order (1|2|3)")
      ->capture_default_str();
  cmd->add_flag("--exact-inclusion", df.exact_inclusion,
                "disable the one-pixel tolerance of simplicial/expectation checks");
  cmd->add_flag("--with-replacement", df.with_replacement,
                "draw band/simplicial subsamples with replacement");
}

setdepth::DepthConfig make_depth_config(const DepthFlags& df, std::uint64_t seed) {
  setdepth::DepthConfig cfg;
  cfg.kind = setdepth::depth_kind_from_name(df.kind);
  cfg.n = df.n;
  cfg.s = df.s;
  cfg.m = df.m;
  cfg.weight_grid = df.weight_grid;
  cfg.expectation_resamples = df.expectation_resamples;
  cfg.max_m = df.max_m;
  cfg.fd_order = df.fd_order;
  cfg.seed = seed;
  cfg.tolerance = df.exact_inclusion ? setdepth::InclusionTolerance::exact
                                     : setdepth::InclusionTolerance::one_pixel;
  cfg.with_replacement = df.with_replacement;
  return cfg;
}

std::string depth_config_comment(const setdepth::DepthConfig& cfg) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "# kind=%s n=%d s=%lld m=%d N=%d seed=%llu",
                setdepth::depth_kind_name(cfg.kind), cfg.n, cfg.s, cfg.m, cfg.weight_grid,
                static_cast<unsigned long long>(cfg.seed));
  return buf;
}

void write_depth_csv(const fs::path& path, const setdepth::DepthConfig& cfg,
                     const std::vector<std::string>& ids, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << depth_config_comment(cfg) << "\n";
  out << "set_id,depth\n";
  for (std::size_t i = 0; i < ids.size(); ++i)
    out << ids[i] << ',' << setdepth::format_g17(values[i]) << "\n";
}

json envelope_to_json(const setdepth::EnvelopeTestResult& r,
                      const std::vector<std::string>& joined_ids) {
  ordered_json j;
  j["p_value"] = r.p_value;
  j["alpha"] = r.alpha;
  j["rejected"] = r.rejected;
  j["permutations"] = r.permutations;
  j["depth"] = setdepth::depth_kind_name(r.config.kind);
  j["n"] = r.config.n;
  j["s"] = r.config.s;
  j["m"] = r.config.m;
  j["N"] = r.config.weight_grid;
  j["seed"] = r.config.seed;
  j["responsible_indices"] = r.responsible;
  j["responsible_ids"] = r.responsible_ids;
  std::vector<double> observed(r.T.cols);
  for (std::size_t k = 0; k < r.T.cols; ++k) observed[k] = r.T.at(0, k);
  j["t_observed"] = observed;
  j["t_low"] = r.t_low;
  j["t_upp"] = r.t_upp;
  j["area_measures"] = r.area_measures;
  j["set_ids"] = joined_ids;
  return j;
}

int run_app(int argc, char** argv) {
  CLI::App app{"statistical depths and two-sample tests for random sets"};
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON file mirroring the command-line flags");
  app.config_formatter(std::make_shared<JsonConfig>());

  std::uint64_t seed = setdepth::kDefaultSeed;
  int threads = setdepth::default_thread_count();
  std::string format = "csv";
  app.add_option("--seed", seed, "PRNG seed (fixed default keeps runs reproducible)")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker threads")->capture_default_str();
  app.add_option("--format", format, "output format for tables: csv|json")
      ->capture_default_str();

  // ---- simulate ----------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "generate a sample of random sets");
  std::string sim_model = "discs";
  int sim_count = 100;
  std::string sim_out, sim_params;
  int sim_w = 100, sim_h = 100;
  double sim_ps = 1.0, sim_lo = 2.0, sim_hi = 4.0, sim_p_annulus = 0.2;
  sim->add_option("--model", sim_model, "discs|mixture|particle|boolean")
      ->capture_default_str();
  sim->add_option("--count", sim_count, "sample size / realisation count")
      ->capture_default_str();
  sim->add_option("--out", sim_out, "output sample directory")->required();
  sim->add_option("--params", sim_params,
                  "JSON parameter file for particle/boolean models");
  sim->add_option("--grid-width", sim_w)->capture_default_str();
  sim->add_option("--grid-height", sim_h)->capture_default_str();
  sim->add_option("--pixel-size", sim_ps)->capture_default_str();
  sim->add_option("--r-lo", sim_lo, "disc radius law lower end")->capture_default_str();
  sim->add_option("--r-hi", sim_hi, "disc radius law upper end")->capture_default_str();
  sim->add_option("--p-annulus", sim_p_annulus, "mixture annulus probability")
      ->capture_default_str();

  // ---- decompose ---------------------------------------------------------
  auto* dec = app.add_subcommand("decompose", "split a binary image into analysis sets");
  std::string dec_in, dec_out, dec_mode = "components", dec_fg = "black";
  int dec_conn = 8, dec_min_px = 1, dec_grid_w = 100, dec_grid_h = 100;
  bool dec_keep_border = false;
  dec->add_option("--in", dec_in, "input mask (PBM or PNG)")->required();
  dec->add_option("--out", dec_out, "output sample directory")->required();
  dec->add_option("--mode", dec_mode, "components|closest-hole")->capture_default_str();
  dec->add_option("--connectivity", dec_conn, "foreground connectivity 4|8")
      ->capture_default_str();
  bool dec_drop_border_flag = false;
  dec->add_flag("--drop-border", dec_drop_border_flag,
                "drop components touching the image border (the default)");
  dec->add_flag("--keep-border", dec_keep_border,
                "keep components touching the image border");
  dec->add_option("--min-px", dec_min_px, "minimum component pixel count")
      ->capture_default_str();
  dec->add_option("--component-grid-width", dec_grid_w)->capture_default_str();
  dec->add_option("--component-grid-height", dec_grid_h)->capture_default_str();
  dec->add_option("--foreground", dec_fg, "which PNG tone is foreground: black|white")
      ->capture_default_str();

  // ---- depth -------------------------------------------------------------
  auto* dep = app.add_subcommand("depth", "depth of every set (or probe) within a sample");
  std::string dep_sample, dep_probes, dep_out;
  DepthFlags dep_flags;
  dep->add_option("--sample", dep_sample, "reference sample directory")->required();
  dep->add_option("--probes", dep_probes, "optional probe sample directory");
  dep->add_option("--out", dep_out, "output CSV")->required();
  add_depth_flags(dep, dep_flags);

  // ---- outliers ----------------------------------------------------------
  auto* outl = app.add_subcommand("outliers", "probe depths and outlier flags per family");
  std::string outl_sample, outl_probes, outl_out;
  std::vector<std::string> outl_depths = {"band", "simplicial"};
  double outl_threshold = setdepth::kOutlierThreshold;
  DepthFlags outl_flags;
  outl->add_option("--sample", outl_sample)->required();
  outl->add_option("--probes", outl_probes)->required();
  outl->add_option("--out", outl_out)->required();
  outl->add_option("--depths", outl_depths, "comma-separated depth families")
      ->delimiter(',')
      ->capture_default_str();
  outl->add_option("--threshold", outl_threshold)->capture_default_str();
  add_depth_flags(outl, outl_flags);

  // ---- ddplot ------------------------------------------------------------
  auto* ddp = app.add_subcommand("ddplot", "depth-vs-depth plot of two samples");
  std::string dd_x, dd_y, dd_out, dd_svg;
  DepthFlags dd_flags;
  ddp->add_option("--x", dd_x, "first sample directory")->required();
  ddp->add_option("--y", dd_y, "second sample directory")->required();
  ddp->add_option("--out", dd_out, "output CSV")->required();
  ddp->add_option("--svg", dd_svg, "optional SVG scatter");
  add_depth_flags(ddp, dd_flags);

  // ---- test-envelope -----------------------------------------------------
  auto* env = app.add_subcommand("test-envelope",
                                 "permutation global envelope test of equal distribution");
  std::string env_x, env_y, env_out;
  int env_perms = 99;
  double env_alpha = 0.05;
  DepthFlags env_flags;
  env->add_option("--x", env_x)->required();
  env->add_option("--y", env_y)->required();
  env->add_option("--out", env_out, "result JSON")->required();
  env->add_option("--perms", env_perms, "number of permutations S")->capture_default_str();
  env->add_option("--alpha", env_alpha, "significance level")->capture_default_str();
  add_depth_flags(env, env_flags);

  // ---- test-regression ---------------------------------------------------
  auto* reg = app.add_subcommand("test-regression",
                                 "bootstrap-t DD-plot regression test of equal distribution");
  std::string reg_x, reg_y, reg_out;
  int reg_bootstrap = 1000;
  DepthFlags reg_flags;
  reg->add_option("--x", reg_x)->required();
  reg->add_option("--y", reg_y)->required();
  reg->add_option("--out", reg_out, "result JSON")->required();
  reg->add_option("--bootstrap", reg_bootstrap, "bootstrap replicates")->capture_default_str();
  add_depth_flags(reg, reg_flags);

  // ---- reproduce ---------------------------------------------------------
  auto* rep = app.add_subcommand("reproduce", "canned experiment pipelines");
  std::string rep_name, rep_out = "reproduce-out";
  int rep_seeds = 10, rep_runs = 25, rep_pairs = 20, rep_perms = 49;
  std::vector<std::string> rep_models = {"boolean-disc", "boolean-ellipse"};
  rep->add_option("experiment", rep_name,
                  "table1 | particle-ddplots | mixture | power-study")
      ->required();
  rep->add_option("--out", rep_out, "output directory")->capture_default_str();
  rep->add_option("--seeds", rep_seeds, "seeds for table1")->capture_default_str();
  rep->add_option("--runs", rep_runs, "runs for mixture")->capture_default_str();
  rep->add_option("--pairs", rep_pairs, "realisation pairs for power-study")
      ->capture_default_str();
  rep->add_option("--perms", rep_perms, "permutations for power-study")->capture_default_str();
  rep->add_option("--models", rep_models,
                  "power-study models: boolean-disc | boolean-ellipse | dir:<sample dir>")
      ->delimiter(',')
      ->capture_default_str();

  // global flags like --seed may appear after the subcommand name
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  using namespace setdepth;

  if (*sim) {
    const Grid grid{sim_w, sim_h, sim_ps};
    if (sim_model == "discs") {
      save_sample(gen_disc_sample(sim_count, sim_lo, sim_hi, grid, seed), sim_out);
    } else if (sim_model == "mixture") {
      const MixtureSample mix = gen_mixture_disc_annulus(sim_count, sim_p_annulus, grid, seed);
      save_sample(mix.sample, sim_out);
      ordered_json j;
      j["annulus_indices"] = mix.annulus_indices;
      std::ofstream(fs::path(sim_out) / "mixture.json") << j.dump(2) << "\n";
    } else if (sim_model == "particle") {
      ParticleModelParams p;
      p.grid = grid;
      if (!sim_params.empty()) {
        json j;
        std::ifstream in(sim_params);
        if (!in) throw std::runtime_error("cannot read " + sim_params);
        in >> j;
        p.mu_R = j.value("mu_R", p.mu_R);
        p.sigma_R = j.value("sigma_R", p.sigma_R);
        p.d = j.value("d", p.d);
        p.lambda = j.value("lambda", p.lambda);
        p.mu_r = j.value("mu_r", p.mu_r);
        p.sigma_r = j.value("sigma_r", p.sigma_r);
      }
      save_sample(gen_particle_sample(p, sim_count, seed), sim_out);
    } else if (sim_model == "boolean") {
      BooleanModelParams p;
      p.window = grid;
      if (!sim_params.empty()) {
        json j;
        std::ifstream in(sim_params);
        if (!in) throw std::runtime_error("cannot read " + sim_params);
        in >> j;
        p.intensity = j.value("intensity", p.intensity);
        const std::string grain = j.value("grain", "disc");
        p.grain = grain == "ellipse" ? BooleanModelParams::GrainKind::ellipse
                                     : BooleanModelParams::GrainKind::disc;
        p.r_min = j.value("r_min", p.r_min);
        p.r_max = j.value("r_max", p.r_max);
        p.a_min = j.value("a_min", p.a_min);
        p.a_max = j.value("a_max", p.a_max);
        p.b_min = j.value("b_min", p.b_min);
        p.b_max = j.value("b_max", p.b_max);
      }
      SetSample sample(p.window);
      Rng root(seed);
      for (int i = 0; i < sim_count; ++i)
        sample.push_back(gen_boolean_realisation(p, root.derive(i).next()));
      save_sample(sample, sim_out);
    } else {
      std::cerr << "unknown model '" << sim_model << "'\n";
      return kExitUsage;
    }
    return 0;
  }

  if (*dec) {
    if (dec_fg != "black" && dec_fg != "white") {
      std::cerr << "--foreground must be black or white\n";
      return kExitUsage;
    }
    if (dec_mode != "components" && dec_mode != "closest-hole") {
      std::cerr << "--mode must be components or closest-hole\n";
      return kExitUsage;
    }
    const ForegroundRule rule =
        dec_fg == "black" ? ForegroundRule::dark : ForegroundRule::bright;
    const BinaryRaster img = load_mask(dec_in, rule);
    DecompositionConfig cfg;
    cfg.mode = dec_mode == "closest-hole" ? DecompositionConfig::Mode::closest_hole
                                          : DecompositionConfig::Mode::components;
    cfg.connectivity = dec_conn;
    cfg.drop_border = !dec_keep_border;
    cfg.min_component_px = dec_min_px;
    cfg.component_grid = Grid{dec_grid_w, dec_grid_h, img.pixel_size()};
    const DecompositionResult res = decompose(img, cfg, dec_in);
    if (res.grid_upscaled)
      std::cerr << "note: component grid enlarged to fit the largest component\n";
    SetSample sample(res.set.components.empty() ? cfg.component_grid
                                                : res.set.components[0].grid());
    for (std::size_t i = 0; i < res.set.components.size(); ++i)
      sample.push_back(res.set.components[i]);
    fs::create_directories(dec_out);
    save_sample(sample, dec_out);
    ordered_json prov;
    prov["source"] = dec_in;
    prov["mode"] = dec_mode;
    prov["connectivity"] = dec_conn;
    prov["drop_border"] = !dec_keep_border;
    prov["min_component_px"] = dec_min_px;
    prov["component_grid"] = {{"width", sample.grid.width},
                              {"height", sample.grid.height},
                              {"pixel_size", sample.grid.pixel_size}};
    prov["grid_upscaled"] = res.grid_upscaled;
    prov["dropped_border"] = res.dropped_border;
    prov["dropped_small"] = res.dropped_small;
    prov["hole_free"] = res.hole_free;
    std::ofstream(fs::path(dec_out) / "provenance.json") << prov.dump(2) << "\n";
    return 0;
  }

  if (*dep) {
    const SetSample sample = load_sample(dep_sample);
    const DepthConfig cfg = make_depth_config(dep_flags, seed);
    if (dep_probes.empty()) {
      DepthEngine engine(sample, cfg, threads);
      write_depth_csv(dep_out, cfg, sample.ids, engine.evaluate(sample));
    } else {
      const SetSample probes = load_sample(dep_probes);
      write_depth_csv(dep_out, cfg, probes.ids, probe_depths(sample, probes, cfg, threads));
    }
    return 0;
  }

  if (*outl) {
    const SetSample sample = load_sample(outl_sample);
    const SetSample probes = load_sample(outl_probes);
    std::vector<std::vector<double>> columns;
    for (const std::string& name : outl_depths) {
      DepthFlags df = outl_flags;
      df.kind = name;
      columns.push_back(probe_depths(sample, probes, make_depth_config(df, seed), threads));
    }
    if (format == "json") {
      ordered_json j = ordered_json::array();
      for (std::size_t p = 0; p < probes.size(); ++p) {
        ordered_json row;
        row["probe"] = probes.ids[p];
        for (std::size_t d = 0; d < outl_depths.size(); ++d) {
          row[outl_depths[d]] = columns[d][p];
          row[outl_depths[d] + "_outlier"] = columns[d][p] < outl_threshold;
        }
        j.push_back(row);
      }
      std::ofstream(outl_out) << j.dump(2) << "\n";
    } else {
      std::ofstream out(outl_out);
      out << "probe";
      for (const auto& d : outl_depths) out << ',' << d << ',' << d << "_outlier";
      out << "\n";
      for (std::size_t p = 0; p < probes.size(); ++p) {
        out << probes.ids[p];
        for (std::size_t d = 0; d < outl_depths.size(); ++d)
          out << ',' << format_g17(columns[d][p]) << ','
              << (columns[d][p] < outl_threshold ? "+" : "-");
        out << "\n";
      }
    }
    return 0;
  }

  if (*ddp) {
    const SetSample x = load_sample(dd_x);
    const SetSample y = load_sample(dd_y);
    const DDPlot plot = compute_ddplot(x, y, make_depth_config(dd_flags, seed), threads);
    export_ddplot_csv(plot, dd_out);
    if (!dd_svg.empty()) export_ddplot_svg(plot, dd_svg);
    return 0;
  }

  if (*env) {
    const SetSample x = load_sample(env_x);
    const SetSample y = load_sample(env_y);
    const EnvelopeTestResult r = envelope_test(x, y, make_depth_config(env_flags, seed),
                                               env_perms, env_alpha, seed, threads);
    const SetSample joined = joined_sample(x, y);
    std::ofstream(env_out) << envelope_to_json(r, joined.ids).dump(2) << "\n";
    std::printf("p_value %.17g  rejected %s  responsible %zu\n", r.p_value,
                r.rejected ? "yes" : "no", r.responsible.size());
    return 0;
  }

  if (*reg) {
    const SetSample x = load_sample(reg_x);
    const SetSample y = load_sample(reg_y);
    const DDPlot plot = compute_ddplot(x, y, make_depth_config(reg_flags, seed), threads);
    const RegressionTestResult r = regression_test(plot, reg_bootstrap, seed, threads);
    ordered_json j;
    j["beta0"] = r.beta0;
    j["beta1"] = r.beta1;
    j["p0"] = r.p0;
    j["p1"] = r.p1;
    j["p_adjusted"] = r.p_adjusted;
    j["bootstrap"] = r.bootstrap_B;
    std::ofstream(reg_out) << j.dump(2) << "\n";
    std::printf("beta0 %.4f beta1 %.4f p0 %.17g p1 %.17g p_adjusted %.17g\n", r.beta0, r.beta1,
                r.p0, r.p1, r.p_adjusted);
    return 0;
  }

  if (*rep) {
    return run_reproduce(rep_name, rep_out, rep_seeds, rep_runs, rep_pairs, rep_perms,
                         rep_models, seed, threads);
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const CLI::ParseError&) {
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
