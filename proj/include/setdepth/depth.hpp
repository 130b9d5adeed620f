#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "setdepth/distance.hpp"
#include "setdepth/minkowski.hpp"
#include "setdepth/parallel.hpp"
#include "setdepth/raster.hpp"
#include "setdepth/rng.hpp"
#include "setdepth/sample.hpp"

namespace setdepth {

inline constexpr std::uint64_t kDefaultSeed = 987654321;

enum class DepthKind {
  infimal,
  band,
  signed_distance,
  hausdorff_typeB,
  lebesgue_typeB,
  expectation,
  simplicial
};

inline const char* depth_kind_name(DepthKind k) {
  switch (k) {
    case DepthKind::infimal: return "infimal";
    case DepthKind::band: return "band";
    case DepthKind::signed_distance: return "signed_distance";
    case DepthKind::hausdorff_typeB: return "hausdorff";
    case DepthKind::lebesgue_typeB: return "lebesgue";
    case DepthKind::expectation: return "expectation";
    case DepthKind::simplicial: return "simplicial";
  }
  return "?";
}

inline DepthKind depth_kind_from_name(const std::string& name) {
  for (DepthKind k : {DepthKind::infimal, DepthKind::band, DepthKind::signed_distance,
                      DepthKind::hausdorff_typeB, DepthKind::lebesgue_typeB,
                      DepthKind::expectation, DepthKind::simplicial})
    if (name == depth_kind_name(k)) return k;
  throw std::invalid_argument("unknown depth kind: " + name);
}

/// Inclusion checks for the Minkowski-combination depths. `one_pixel` allows
/// a one-pixel ring of slack absorbing raster scaling noise; `exact` tests
/// plain mask inclusion.
enum class InclusionTolerance { exact, one_pixel };

struct DepthConfig {
  DepthKind kind = DepthKind::band;
  int n = 3;                     // subset size for band depth
  long long s = 1000;            // replicate count for band / simplicial
  int m = 3;                     // tuple length for simplicial / expectation
  int weight_grid = 5;           // N: weights are multiples of 1/N
  int expectation_resamples = 20;  // resampled tuples per expectation bound
  int max_m = 10;                // expectation depth search cap
  int fd_order = 1;              // signed-distance depth: 1 field, 2 gradient, 3 laplacian
  std::uint64_t seed = kDefaultSeed;
  bool with_replacement = false;  // subsample draw mode for band / simplicial
  InclusionTolerance tolerance = InclusionTolerance::one_pixel;
  bool infimal_skip_degenerate = true;
  std::size_t max_combinations = 100000;
  std::size_t max_accum_pixels = std::size_t{64} << 20;

  void validate(std::size_t sample_size) const {
    switch (kind) {
      case DepthKind::band:
        if (n < 1 || static_cast<std::size_t>(n) > sample_size)
          throw std::invalid_argument("DepthConfig: n must be in [1, sample size]");
        if (s < 1) throw std::invalid_argument("DepthConfig: s must be >= 1");
        break;
      case DepthKind::simplicial:
        if (m < 1 || static_cast<std::size_t>(m) > sample_size)
          throw std::invalid_argument("DepthConfig: m must be in [1, sample size]");
        if (s < 1) throw std::invalid_argument("DepthConfig: s must be >= 1");
        if (weight_grid < 1)
          throw std::invalid_argument("DepthConfig: weight grid must be >= 1");
        break;
      case DepthKind::expectation:
        if (expectation_resamples < 1)
          throw std::invalid_argument("DepthConfig: expectation_resamples must be >= 1");
        if (max_m < 1) throw std::invalid_argument("DepthConfig: max_m must be >= 1");
        break;
      case DepthKind::signed_distance:
        if (fd_order < 1 || fd_order > 3)
          throw std::invalid_argument("DepthConfig: fd_order must be 1, 2 or 3");
        break;
      default:
        break;
    }
  }
};

/// Per-set depths of a sample against a reference sample, with the
/// estimator configuration that produced them.
struct DepthVector {
  std::vector<double> values;
  std::string reference_sample_id;
  DepthConfig config;
};

namespace detail {

inline constexpr std::uint64_t kBandStream = 0xb1;
inline constexpr std::uint64_t kSimplicialStream = 0x51;
inline constexpr std::uint64_t kExpectationStream = 0xe8;

// Saturating binomial coefficient.
inline unsigned long long comb_count(unsigned long long n, unsigned long long k,
                                     unsigned long long cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long result = 1;
  for (unsigned long long i = 1; i <= k; ++i) {
    if (result > cap) return cap + 1;
    result = result * (n - k + i) / i;
  }
  return std::min(result, cap + 1);
}

// All k-subsets of [0, n) in lexicographic order.
inline std::vector<std::vector<std::uint32_t>> enumerate_subsets(std::uint32_t n,
                                                                 std::uint32_t k) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> idx(k);
  for (std::uint32_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (std::uint32_t j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Index tuples for the replicate draws of band / simplicial estimators:
// exhaustive when C(M, k) <= s, otherwise s seeded draws.
inline std::vector<std::vector<std::uint32_t>> replicate_subsets(std::uint32_t M, std::uint32_t k,
                                                                 long long s, const Rng& root,
                                                                 bool with_replacement) {
  const auto total = comb_count(M, k, static_cast<unsigned long long>(s));
  if (!with_replacement && total <= static_cast<unsigned long long>(s))
    return enumerate_subsets(M, k);
  std::vector<std::vector<std::uint32_t>> out(static_cast<std::size_t>(s));
  for (long long j = 0; j < s; ++j) {
    Rng rng = root.derive(static_cast<std::uint64_t>(j));
    if (with_replacement) {
      std::vector<std::uint32_t> tuple(k);
      for (std::uint32_t i = 0; i < k; ++i)
        tuple[i] = static_cast<std::uint32_t>(rng.below(M));
      out[static_cast<std::size_t>(j)] = std::move(tuple);
    } else {
      out[static_cast<std::size_t>(j)] = rng.sample_without_replacement(M, k);
    }
  }
  return out;
}

// Compositions of N into m non-negative parts, lexicographic.
inline std::vector<std::vector<int>> weight_compositions(int N, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> parts(static_cast<std::size_t>(m), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      parts[static_cast<std::size_t>(pos)] = left;
      out.push_back(parts);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      parts[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, N);
  return out;
}

inline ScalarField transformed_field(const BinaryRaster& mask, int fd_order) {
  ScalarField f = signed_distance_field(mask);
  if (fd_order == 2) return gradient_magnitude_field(f);
  if (fd_order == 3) return laplacian_field(f);
  return f;
}

}  // namespace detail

/// Depth estimators bound to a reference sample. Construction performs all
/// reference-only work (replicate draws, band masks, distance transforms,
/// expectation bounds); evaluation of probe sets is then a pure function and
/// safe to run from multiple threads.
class DepthEngine {
 public:
  DepthEngine(const SetSample& reference, const DepthConfig& cfg, int threads = 1)
      : ref_(reference), cfg_(cfg), threads_(resolve_threads(threads)) {
    if (ref_.size() == 0) throw std::invalid_argument("DepthEngine: empty reference sample");
    cfg_.validate(ref_.size());
    switch (cfg_.kind) {
      case DepthKind::band: build_band(); break;
      case DepthKind::infimal: build_infimal(); break;
      case DepthKind::hausdorff_typeB: build_hausdorff(); break;
      case DepthKind::lebesgue_typeB: break;
      case DepthKind::signed_distance: build_signed_distance(); break;
      case DepthKind::expectation: build_expectation(); break;
      case DepthKind::simplicial: build_simplicial(); break;
    }
  }

  const DepthConfig& config() const { return cfg_; }
  const SetSample& reference() const { return ref_; }

  double operator()(const BinaryRaster& probe) const {
    std::vector<BinaryRaster> one{probe};
    return evaluate(one)[0];
  }

  std::vector<double> evaluate(const std::vector<BinaryRaster>& probes) const {
    for (const auto& p : probes)
      if (p.grid() != ref_.grid)
        throw std::invalid_argument("DepthEngine: probe on a different grid");
    switch (cfg_.kind) {
      case DepthKind::band: return eval_band(probes);
      case DepthKind::infimal: return eval_infimal(probes);
      case DepthKind::hausdorff_typeB: return eval_hausdorff(probes);
      case DepthKind::lebesgue_typeB: return eval_lebesgue(probes);
      case DepthKind::signed_distance: return eval_signed_distance(probes);
      case DepthKind::expectation: return eval_expectation(probes);
      case DepthKind::simplicial: return eval_simplicial(probes);
    }
    throw std::logic_error("DepthEngine: unreachable");
  }

  std::vector<double> evaluate(const SetSample& probes) const { return evaluate(probes.sets); }

 private:
  // ---- band ----------------------------------------------------------
  void build_band() {
    const auto subsets = detail::replicate_subsets(static_cast<std::uint32_t>(ref_.size()),
                                                   static_cast<std::uint32_t>(cfg_.n), cfg_.s,
                                                   Rng(cfg_.seed).derive(detail::kBandStream),
                                                   cfg_.with_replacement);
    band_lo_.reserve(subsets.size());
    band_hi_.reserve(subsets.size());
    for (const auto& subset : subsets) {
      BinaryRaster lo = ref_.sets[subset[0]];
      BinaryRaster hi = ref_.sets[subset[0]];
      for (std::size_t i = 1; i < subset.size(); ++i) {
        lo.and_with(ref_.sets[subset[i]]);
        hi.or_with(ref_.sets[subset[i]]);
      }
      band_lo_.push_back(std::move(lo));
      band_hi_.push_back(std::move(hi));
    }
  }

  std::vector<double> eval_band(const std::vector<BinaryRaster>& probes) const {
    std::vector<double> out(probes.size());
    parallel_for(static_cast<std::int64_t>(probes.size()), threads_, [&](std::int64_t i) {
      const BinaryRaster& f = probes[static_cast<std::size_t>(i)];
      long long hits = 0;
      for (std::size_t j = 0; j < band_lo_.size(); ++j)
        if (is_subset(band_lo_[j], f) && is_subset(f, band_hi_[j])) ++hits;
      out[static_cast<std::size_t>(i)] =
          static_cast<double>(hits) / static_cast<double>(band_lo_.size());
    });
    return out;
  }

  // ---- infimal -------------------------------------------------------
  void build_infimal() {
    const std::size_t px = static_cast<std::size_t>(ref_.grid.width) * ref_.grid.height;
    on_counts_.assign(px, 0);
    for (const auto& s : ref_.sets)
      for (int y = 0; y < s.height(); ++y)
        for (int x = 0; x < s.width(); ++x)
          if (s.get(x, y)) ++on_counts_[static_cast<std::size_t>(y) * s.width() + x];
  }

  std::vector<double> eval_infimal(const std::vector<BinaryRaster>& probes) const {
    const int M = static_cast<int>(ref_.size());
    std::vector<double> out(probes.size());
    parallel_for(static_cast<std::int64_t>(probes.size()), threads_, [&](std::int64_t pi) {
      const BinaryRaster& f = probes[static_cast<std::size_t>(pi)];
      int min_varying = M + 1;
      int min_all = M + 1;
      for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x) {
          const int cnt = on_counts_[static_cast<std::size_t>(y) * f.width() + x];
          const int agree = f.get(x, y) ? cnt : M - cnt;
          min_all = std::min(min_all, agree);
          if (cnt > 0 && cnt < M) min_varying = std::min(min_varying, agree);
        }
      // Pixels where the whole reference agrees carry no ordering
      // information; they are skipped unless the reference is degenerate
      // everywhere, in which case the raw minimum (0 or 1 by agreement)
      // applies.
      const int chosen = (cfg_.infimal_skip_degenerate && min_varying <= M) ? min_varying
                                                                            : min_all;
      out[static_cast<std::size_t>(pi)] = static_cast<double>(chosen) / M;
    });
    return out;
  }

  // ---- type B --------------------------------------------------------
  void build_hausdorff() {
    for (const auto& s : ref_.sets)
      if (s.none())
        throw std::invalid_argument("DepthEngine: hausdorff depth needs non-empty sets");
    ref_edt_.resize(ref_.size());
    parallel_for(static_cast<std::int64_t>(ref_.size()), threads_, [&](std::int64_t i) {
      ref_edt_[static_cast<std::size_t>(i)] =
          squared_distance_transform(ref_.sets[static_cast<std::size_t>(i)]);
    });
  }

  std::vector<double> eval_hausdorff(const std::vector<BinaryRaster>& probes) const {
    std::vector<double> out(probes.size());
    parallel_for(static_cast<std::int64_t>(probes.size()), threads_, [&](std::int64_t pi) {
      const BinaryRaster& f = probes[static_cast<std::size_t>(pi)];
      if (f.none())
        throw std::invalid_argument("DepthEngine: hausdorff depth of the empty set");
      const auto f_edt = squared_distance_transform(f);
      const int w = f.width(), h = f.height();
      double sum = 0.0;
      for (std::size_t r = 0; r < ref_.size(); ++r) {
        std::int64_t worst = 0;
        const BinaryRaster& g = ref_.sets[r];
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (f.get(x, y) && ref_edt_[r][i] > worst) worst = ref_edt_[r][i];
            if (g.get(x, y) && f_edt[i] > worst) worst = f_edt[i];
          }
        sum += std::sqrt(static_cast<double>(worst)) * f.pixel_size();
      }
      out[static_cast<std::size_t>(pi)] = 1.0 / (1.0 + sum / static_cast<double>(ref_.size()));
    });
    return out;
  }

  std::vector<double> eval_lebesgue(const std::vector<BinaryRaster>& probes) const {
    std::vector<double> out(probes.size());
    parallel_for(static_cast<std::int64_t>(probes.size()), threads_, [&](std::int64_t pi) {
      const BinaryRaster& f = probes[static_cast<std::size_t>(pi)];
      double sum = 0.0;
      for (const auto& g : ref_.sets) sum += symmetric_difference_area(f, g);
      out[static_cast<std::size_t>(pi)] = 1.0 / (1.0 + sum / static_cast<double>(ref_.size()));
    });
    return out;
  }

  // ---- signed distance ------------------------------------------------
  void build_signed_distance() {
    ref_fields_.resize(ref_.size());
    parallel_for(static_cast<std::int64_t>(ref_.size()), threads_, [&](std::int64_t i) {
      ref_fields_[static_cast<std::size_t>(i)] =
          detail::transformed_field(ref_.sets[static_cast<std::size_t>(i)], cfg_.fd_order)
              .values;
    });
    const std::size_t px = static_cast<std::size_t>(ref_.grid.width) * ref_.grid.height;
    sorted_fields_.assign(px * ref_.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(px), threads_, [&](std::int64_t p) {
      double* col = sorted_fields_.data() + static_cast<std::size_t>(p) * ref_.size();
      for (std::size_t i = 0; i < ref_.size(); ++i)
        col[i] = ref_fields_[i][static_cast<std::size_t>(p)];
      std::sort(col, col + ref_.size());
    });
  }

  std::vector<double> eval_signed_distance(const std::vector<BinaryRaster>& probes) const {
    const std::size_t M = ref_.size();
    const std::size_t px = static_cast<std::size_t>(ref_.grid.width) * ref_.grid.height;
    std::vector<double> out(probes.size());
    parallel_for(static_cast<std::int64_t>(probes.size()), threads_, [&](std::int64_t pi) {
      const auto field =
          detail::transformed_field(probes[static_cast<std::size_t>(pi)], cfg_.fd_order).values;
      double acc = 0.0;
      for (std::size_t p = 0; p < px; ++p) {
        const double* col = sorted_fields_.data() + p * M;
        const double v = field[p];
        const std::size_t le = std::upper_bound(col, col + M, v) - col;
        const std::size_t ge = M - (std::lower_bound(col, col + M, v) - col);
        acc += static_cast<double>(std::min(le, ge));
      }
      out[static_cast<std::size_t>(pi)] = acc / (static_cast<double>(px) * M);
    });
    return out;
  }

  // ---- expectation -----------------------------------------------------
  void build_expectation() {
    const int cap = std::min<int>(cfg_.max_m, static_cast<int>(ref_.size()));
    exp_lower_.resize(cap);
    exp_upper_.resize(cap);
    exp_lower_empty_.assign(cap, false);
    const Rng root = Rng(cfg_.seed).derive(detail::kExpectationStream);
    for (int m = 1; m <= cap; ++m) {
      std::vector<BinaryRaster> inters, unions;
      inters.reserve(cfg_.expectation_resamples);
      unions.reserve(cfg_.expectation_resamples);
      bool lower_empty = false;
      for (int j = 0; j < cfg_.expectation_resamples; ++j) {
        Rng rng = root.derive(static_cast<std::uint64_t>(m) * 1000003u +
                              static_cast<std::uint64_t>(j));
        BinaryRaster inter = ref_.sets[rng.below(ref_.size())];
        BinaryRaster uni = inter;
        for (int t = 1; t < m; ++t) {
          const auto& next = ref_.sets[rng.below(ref_.size())];
          inter.and_with(next);
          uni.or_with(next);
        }
        if (inter.none()) lower_empty = true;
        inters.push_back(std::move(inter));
        unions.push_back(std::move(uni));
      }
      // A sometimes-empty intersection has no selection expectation; treat
      // the lower bound as unconstraining in that case.
      exp_lower_empty_[m - 1] = lower_empty;
      if (!lower_empty) exp_lower_[m - 1] = minkowski_average(inters, cfg_.max_accum_pixels);
      exp_upper_[m - 1] = minkowski_average(unions, cfg_.max_accum_pixels);
      if (cfg_.tolerance == InclusionTolerance::one_pixel)
        exp_upper_[m - 1] = dilate(exp_upper_[m - 1], Neighbourhood::box);
    }
  }

  std::vector<double> eval_expectation(const std::vector<BinaryRaster>& probes) const {
    std::vector<double> out(probes.size());
    parallel_for(static_cast<std::int64_t>(probes.size()), threads_, [&](std::int64_t pi) {
      const BinaryRaster& f = probes[static_cast<std::size_t>(pi)];
      const BinaryRaster f_for_lower = cfg_.tolerance == InclusionTolerance::one_pixel
                                           ? dilate(f, Neighbourhood::box)
                                           : f;
      double depth = 0.0;
      for (std::size_t m = 1; m <= exp_upper_.size(); ++m) {
        const bool lower_ok =
            exp_lower_empty_[m - 1] || is_subset(exp_lower_[m - 1], f_for_lower);
        if (lower_ok && is_subset(f, exp_upper_[m - 1])) {
          depth = 1.0 / static_cast<double>(m);
          break;
        }
      }
      out[static_cast<std::size_t>(pi)] = depth;
    });
    return out;
  }

  // ---- simplicial ------------------------------------------------------
  void build_simplicial() {
    const auto combos = detail::comb_count(cfg_.weight_grid + cfg_.m - 1, cfg_.m - 1,
                                           cfg_.max_combinations);
    if (combos > cfg_.max_combinations)
      throw std::invalid_argument(
          "DepthEngine: simplicial weight combinations exceed max_combinations");
    simp_subsamples_ = detail::replicate_subsets(static_cast<std::uint32_t>(ref_.size()),
                                                 static_cast<std::uint32_t>(cfg_.m), cfg_.s,
                                                 Rng(cfg_.seed).derive(detail::kSimplicialStream),
                                                 cfg_.with_replacement);
    simp_weights_ = detail::weight_compositions(cfg_.weight_grid, cfg_.m);
  }

  std::vector<double> eval_simplicial(const std::vector<BinaryRaster>& probes) const {
    const std::size_t K = probes.size();
    const std::size_t J = simp_subsamples_.size();
    std::vector<std::atomic<long long>> hits(K);
    for (auto& h : hits) h.store(0, std::memory_order_relaxed);

    parallel_for(static_cast<std::int64_t>(J), threads_, [&](std::int64_t j) {
      const auto& subsample = simp_subsamples_[static_cast<std::size_t>(j)];
      std::vector<char> found_lower(K, 0), found_upper(K, 0);
      std::size_t undecided = 2 * K;
      std::vector<BinaryRaster> members(subsample.size());
      for (std::size_t t = 0; t < subsample.size(); ++t) members[t] = ref_.sets[subsample[t]];
      for (const auto& composition : simp_weights_) {
        BinaryRaster combo =
            minkowski_convex_combination(members, composition, cfg_.weight_grid);
        BinaryRaster lower = combo, upper = combo;
        if (cfg_.tolerance == InclusionTolerance::one_pixel) {
          lower = erode(combo, Neighbourhood::cross);
          upper = dilate(combo, Neighbourhood::cross);
        }
        for (std::size_t k = 0; k < K; ++k) {
          if (!found_lower[k] && is_subset(lower, probes[k])) {
            found_lower[k] = 1;
            --undecided;
          }
          if (!found_upper[k] && is_subset(probes[k], upper)) {
            found_upper[k] = 1;
            --undecided;
          }
        }
        if (undecided == 0) break;
      }
      for (std::size_t k = 0; k < K; ++k)
        if (found_lower[k] && found_upper[k])
          hits[k].fetch_add(1, std::memory_order_relaxed);
    });

    std::vector<double> out(K);
    for (std::size_t k = 0; k < K; ++k)
      out[k] = static_cast<double>(hits[k].load()) / static_cast<double>(J);
    return out;
  }

  SetSample ref_;
  DepthConfig cfg_;
  int threads_;

  std::vector<BinaryRaster> band_lo_, band_hi_;
  std::vector<int> on_counts_;
  std::vector<std::vector<std::int64_t>> ref_edt_;
  std::vector<std::vector<double>> ref_fields_;
  std::vector<double> sorted_fields_;
  std::vector<BinaryRaster> exp_lower_, exp_upper_;
  std::vector<char> exp_lower_empty_;
  std::vector<std::vector<std::uint32_t>> simp_subsamples_;
  std::vector<std::vector<int>> simp_weights_;
};

// ---------------------------------------------------------------------------
// Convenience wrappers for single evaluations.

inline double depth_infimal(const BinaryRaster& f, const SetSample& sample,
                            const DepthConfig& base = {}) {
  DepthConfig cfg = base;
  cfg.kind = DepthKind::infimal;
  return DepthEngine(sample, cfg)(f);
}

inline double depth_band(const BinaryRaster& f, const SetSample& sample, int n, long long s,
                         std::uint64_t seed = kDefaultSeed) {
  DepthConfig cfg;
  cfg.kind = DepthKind::band;
  cfg.n = n;
  cfg.s = s;
  cfg.seed = seed;
  return DepthEngine(sample, cfg)(f);
}

inline double depth_signed_distance(const BinaryRaster& f, const SetSample& sample,
                                    int fd_order) {
  DepthConfig cfg;
  cfg.kind = DepthKind::signed_distance;
  cfg.fd_order = fd_order;
  return DepthEngine(sample, cfg)(f);
}

inline double depth_typeB(const BinaryRaster& f, const SetSample& sample, DepthKind metric) {
  if (metric != DepthKind::hausdorff_typeB && metric != DepthKind::lebesgue_typeB)
    throw std::invalid_argument("depth_typeB: metric must be hausdorff or lebesgue");
  DepthConfig cfg;
  cfg.kind = metric;
  return DepthEngine(sample, cfg)(f);
}

inline double depth_expectation(const BinaryRaster& f, const SetSample& sample, int max_m,
                                int resamples, std::uint64_t seed = kDefaultSeed) {
  DepthConfig cfg;
  cfg.kind = DepthKind::expectation;
  cfg.max_m = max_m;
  cfg.expectation_resamples = resamples;
  cfg.seed = seed;
  return DepthEngine(sample, cfg)(f);
}

inline double depth_simplicial(const BinaryRaster& f, const SetSample& sample, int m, long long s,
                               int weight_grid, std::uint64_t seed = kDefaultSeed) {
  DepthConfig cfg;
  cfg.kind = DepthKind::simplicial;
  cfg.m = m;
  cfg.s = s;
  cfg.weight_grid = weight_grid;
  cfg.seed = seed;
  return DepthEngine(sample, cfg)(f);
}

// ---------------------------------------------------------------------------
// Outlier flagging.

inline constexpr double kOutlierThreshold = 0.05;

/// Depth of each probe "within the sample". For most depths the probe joins
/// its own reference (the sample plus that one probe); the infimal depth is
/// evaluated against the sample alone, since a probe contributing its own
/// indicator column would bound its depth at 1/M everywhere it deviates.
inline std::vector<double> probe_depths(const SetSample& sample, const SetSample& probes,
                                        const DepthConfig& cfg, int threads = 1) {
  sample.require_same_grid(probes, "probe_depths");
  std::vector<double> out(probes.size());
  if (probes.size() == 0) return out;
  if (cfg.kind == DepthKind::infimal) {
    DepthEngine engine(sample, cfg, threads);
    return engine.evaluate(probes);
  }
  parallel_for(static_cast<std::int64_t>(probes.size()), threads, [&](std::int64_t i) {
    SetSample extended = sample;
    extended.push_back(probes.sets[static_cast<std::size_t>(i)],
                       "probe:" + probes.ids[static_cast<std::size_t>(i)]);
    DepthEngine engine(extended, cfg, 1);
    out[static_cast<std::size_t>(i)] = engine(probes.sets[static_cast<std::size_t>(i)]);
  });
  return out;
}

/// Indices of sample members whose depth within the sample is below the
/// threshold. Members stay in the reference while their own depth is
/// computed (again excepting the infimal depth, evaluated leave-one-out).
inline std::vector<std::size_t> flag_outliers(const SetSample& sample, const DepthConfig& cfg,
                                              double threshold = kOutlierThreshold,
                                              int threads = 1) {
  std::vector<double> depths(sample.size());
  if (cfg.kind == DepthKind::infimal && sample.size() >= 2) {
    const int M = static_cast<int>(sample.size());
    std::vector<int> counts(static_cast<std::size_t>(sample.grid.width) * sample.grid.height, 0);
    for (const auto& s : sample.sets)
      for (int y = 0; y < s.height(); ++y)
        for (int x = 0; x < s.width(); ++x)
          if (s.get(x, y)) ++counts[static_cast<std::size_t>(y) * s.width() + x];
    parallel_for(static_cast<std::int64_t>(sample.size()), threads, [&](std::int64_t i) {
      const BinaryRaster& f = sample.sets[static_cast<std::size_t>(i)];
      int min_varying = M;
      int min_all = M;
      for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x) {
          const bool on = f.get(x, y);
          const int cnt = counts[static_cast<std::size_t>(y) * f.width() + x] - (on ? 1 : 0);
          const int agree = on ? cnt : (M - 1) - cnt;
          min_all = std::min(min_all, agree);
          if (cnt > 0 && cnt < M - 1) min_varying = std::min(min_varying, agree);
        }
      const int chosen =
          (cfg.infimal_skip_degenerate && min_varying < M) ? min_varying : min_all;
      depths[static_cast<std::size_t>(i)] = static_cast<double>(chosen) / (M - 1);
    });
  } else if (cfg.kind == DepthKind::infimal) {
    depths.assign(sample.size(), 1.0);  // single-member sample
  } else {
    DepthEngine engine(sample, cfg, threads);
    depths = engine.evaluate(sample);
  }
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i < depths.size(); ++i)
    if (depths[i] < threshold) flagged.push_back(i);
  return flagged;
}

}  // namespace setdepth
