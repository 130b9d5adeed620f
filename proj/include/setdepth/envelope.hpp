#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "setdepth/depth.hpp"
#include "setdepth/parallel.hpp"
#include "setdepth/rng.hpp"
#include "setdepth/sample.hpp"

namespace setdepth {

/// Row-major matrix of test statistics: row 0 is the observed curve, rows
/// 1..S are the permutation replicates; columns index the joined sample.
struct StatMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  StatMatrix() = default;
  StatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double at(std::size_t i, std::size_t k) const { return v[i * cols + k]; }
  double& at(std::size_t i, std::size_t k) { return v[i * cols + k]; }
};

/// Extreme ranks and area rank measures of the curves of a statistic matrix.
struct RankMeasures {
  std::vector<int> extreme_rank;          // R_i, two-sided, per curve
  std::vector<double> area_measure;       // a_i per curve
  std::vector<int> observed_pointwise;    // R_1(k) for the observed curve
};

/// Two-sided extreme ranks with the min-rank tie convention, their
/// continuous-rank refinement, and the area rank measure
/// a_i = (R_i - mean_k (R_i - C_i(k))^+ 1(C_i(k) < R_i)) / (S+1).
inline RankMeasures rank_measures(const StatMatrix& T) {
  const std::size_t n = T.rows;  // S + 1
  const std::size_t K = T.cols;
  if (n < 2) throw std::invalid_argument("rank_measures: need at least two curves");
  if (K < 1) throw std::invalid_argument("rank_measures: empty statistic vectors");

  RankMeasures out;
  out.extreme_rank.assign(n, static_cast<int>(n));
  out.area_measure.assign(n, 0.0);
  out.observed_pointwise.assign(K, static_cast<int>(n));

  std::vector<std::vector<int>> pointwise_rank(n, std::vector<int>(K));
  std::vector<std::vector<double>> two_sided_c(n, std::vector<double>(K));

  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < K; ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return T.at(a, k) < T.at(b, k);
    });

    const double lo = T.at(order[0], k);
    const double hi = T.at(order[n - 1], k);
    const bool degenerate = !(hi > lo);

    // Walk tie blocks once for the discrete min-ranks.
    std::size_t pos = 0;
    while (pos < n) {
      std::size_t end = pos;
      while (end < n && T.at(order[end], k) == T.at(order[pos], k)) ++end;
      const int up = static_cast<int>(pos) + 1;            // 1 + #{strictly below}
      const int down = static_cast<int>(n - end) + 1;      // 1 + #{strictly above}
      const int r = std::min(up, down);
      for (std::size_t q = pos; q < end; ++q) pointwise_rank[order[q]][k] = r;
      pos = end;
    }

    // Continuous ranks by sorted position; ties inside a column get the
    // midpoint fraction, a fully constant column the global midpoint.
    for (std::size_t i = 0; i < n; ++i) {
      double c;
      if (degenerate) {
        c = static_cast<double>(n) / 2.0;
      } else if (i == 0) {
        c = std::exp(-(T.at(order[1], k) - lo) / (hi - lo));
      } else if (i == n - 1) {
        const double denom = T.at(order[n - 2], k) - lo;
        c = denom > 0.0
                ? static_cast<double>(n) - std::exp(-(hi - T.at(order[n - 2], k)) / denom)
                : static_cast<double>(n);
      } else {
        const double denom = T.at(order[i + 1], k) - T.at(order[i - 1], k);
        const double frac = denom > 0.0 ? (T.at(order[i], k) - T.at(order[i - 1], k)) / denom
                                        : 0.5;
        c = static_cast<double>(i) + frac;  // sorted position i+1 -> (i+1)-1 + frac
      }
      two_sided_c[order[i]][k] = std::min(c, static_cast<double>(n) - c);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    int r = static_cast<int>(n);
    for (std::size_t k = 0; k < K; ++k) r = std::min(r, pointwise_rank[i][k]);
    out.extreme_rank[i] = r;
    double penalty = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double c = two_sided_c[i][k];
      if (c < static_cast<double>(r)) penalty += static_cast<double>(r) - c;
    }
    out.area_measure[i] =
        (static_cast<double>(r) - penalty / static_cast<double>(K)) / static_cast<double>(n);
  }
  out.observed_pointwise = pointwise_rank[0];
  return out;
}

/// Global envelope over the least extreme curves, and the coordinates where
/// the observed curve leaves it.
struct EnvelopeBand {
  std::vector<double> low;
  std::vector<double> upp;
  std::vector<std::size_t> index_set;      // curves forming the envelope
  std::vector<std::size_t> responsible;    // exits of the observed curve
  bool rejected = false;
};

/// Builds the 100(1-alpha)% envelope from the curves whose area measures
/// clear the critical value (the complement of the rejection region, so
/// rejection of the observed curve and an exit from the envelope coincide).
inline EnvelopeBand build_envelope(const StatMatrix& T, const RankMeasures& rm, double alpha) {
  const std::size_t n = T.rows;
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("build_envelope: alpha must be in (0,1)");
  const std::size_t reject_count =
      static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
  if (reject_count == 0)
    throw std::invalid_argument("build_envelope: too few curves for this alpha");

  std::vector<double> sorted_a = rm.area_measure;
  std::sort(sorted_a.begin(), sorted_a.end());
  const double cutoff = sorted_a[reject_count];

  EnvelopeBand band;
  band.low.assign(T.cols, std::numeric_limits<double>::infinity());
  band.upp.assign(T.cols, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    if (rm.area_measure[i] < cutoff) continue;
    band.index_set.push_back(i);
    for (std::size_t k = 0; k < T.cols; ++k) {
      band.low[k] = std::min(band.low[k], T.at(i, k));
      band.upp[k] = std::max(band.upp[k], T.at(i, k));
    }
  }
  band.rejected = rm.area_measure[0] < cutoff;
  for (std::size_t k = 0; k < T.cols; ++k)
    if (T.at(0, k) < band.low[k] || T.at(0, k) > band.upp[k]) band.responsible.push_back(k);
  if (band.rejected && band.responsible.empty()) {
    // Tie fallback: the observed curve sits exactly on the envelope bound at
    // its extreme-rank witnesses.
    const int r1 = rm.extreme_rank[0];
    for (std::size_t k = 0; k < T.cols; ++k)
      if (rm.observed_pointwise[k] == r1 &&
          (T.at(0, k) <= band.low[k] || T.at(0, k) >= band.upp[k]))
        band.responsible.push_back(k);
  }
  return band;
}

struct EnvelopeTestResult {
  StatMatrix T;                        // row 0 observed
  std::vector<double> area_measures;   // a_1 .. a_{S+1}
  double p_value = 1.0;
  double alpha = 0.05;
  std::vector<double> t_low, t_upp;
  std::vector<std::size_t> responsible;     // joined-sample indices (X first)
  std::vector<std::string> responsible_ids;
  bool rejected = false;
  DepthConfig config;
  int permutations = 0;
};

/// Permutation global envelope test of equal distribution of two samples of
/// sets. The test function per curve is the per-set difference of depths in
/// the two (permuted) samples; curves are ordered by the area rank measure;
/// p = #(a_i < a_1)/(S+1).
inline EnvelopeTestResult envelope_test(const SetSample& x, const SetSample& y,
                                        const DepthConfig& cfg, int permutations, double alpha,
                                        std::uint64_t seed, int threads = 1) {
  x.require_same_grid(y, "envelope_test");
  const std::size_t N = x.size(), M = y.size();
  const std::size_t K = N + M;
  if (K < 2) throw std::invalid_argument("envelope_test: need at least two sets");
  if (permutations < 1) throw std::invalid_argument("envelope_test: permutations must be >= 1");
  if (static_cast<double>(permutations) < 1.0 / alpha - 1.0)
    throw std::invalid_argument("envelope_test: too few permutations for this alpha");

  const SetSample joined = joined_sample(x, y);
  const std::size_t n_rows = static_cast<std::size_t>(permutations) + 1;
  StatMatrix T(n_rows, K);

  const Rng root(seed);

  // Signed-distance depths admit a pointwise-rank evaluation over the fixed
  // joined sample; the per-set transformed fields are permutation-invariant
  // and computed once.
  const bool sdf_fast = cfg.kind == DepthKind::signed_distance;
  std::vector<std::vector<double>> fields;
  std::vector<std::uint16_t> order;  // per pixel: joined indices sorted by field value
  const std::size_t px = static_cast<std::size_t>(joined.grid.width) * joined.grid.height;
  if (sdf_fast) {
    if (K > 65535) throw std::invalid_argument("envelope_test: joined sample too large");
    fields.resize(K);
    parallel_for(static_cast<std::int64_t>(K), threads, [&](std::int64_t i) {
      fields[static_cast<std::size_t>(i)] =
          detail::transformed_field(joined.sets[static_cast<std::size_t>(i)], cfg.fd_order)
              .values;
    });
    order.assign(px * K, 0);
    parallel_for(static_cast<std::int64_t>(px), threads, [&](std::int64_t p) {
      std::uint16_t* ord = order.data() + static_cast<std::size_t>(p) * K;
      for (std::size_t i = 0; i < K; ++i) ord[i] = static_cast<std::uint16_t>(i);
      std::stable_sort(ord, ord + K, [&](std::uint16_t a, std::uint16_t b) {
        return fields[a][static_cast<std::size_t>(p)] < fields[b][static_cast<std::size_t>(p)];
      });
    });
  }

  parallel_for(static_cast<std::int64_t>(n_rows), threads, [&](std::int64_t row) {
    std::vector<std::uint32_t> perm(K);
    if (row == 0) {
      for (std::size_t k = 0; k < K; ++k) perm[k] = static_cast<std::uint32_t>(k);
    } else {
      perm = root.derive(0x9e)
                 .derive(static_cast<std::uint64_t>(row))
                 .permutation(static_cast<std::uint32_t>(K));
    }

    // The curve argument k stays attached to the k-th set of the original
    // joined ordering; only the reference samples are relabelled by the
    // permutation. Keeping the columns on fixed sets is what lets an exit
    // at coordinate k name the responsible set, and it keeps each column's
    // permutation distribution tight around that set's behaviour.
    if (sdf_fast) {
      // Membership of each joined set in the permuted first sample.
      std::vector<char> in_x(K, 0);
      for (std::size_t k = 0; k < N; ++k) in_x[perm[k]] = 1;
      std::vector<std::int64_t> sum_x(K, 0), sum_y(K, 0);
      std::vector<int> le_x(K), ge_x(K), le_y(K), ge_y(K);
      for (std::size_t p = 0; p < px; ++p) {
        const std::uint16_t* ord = order.data() + p * K;
        int prefix_x = 0, prefix_y = 0;
        std::size_t pos = 0;
        while (pos < K) {
          std::size_t end = pos;
          const double v = fields[ord[pos]][p];
          int block_x = 0;
          while (end < K && fields[ord[end]][p] == v) {
            block_x += in_x[ord[end]];
            ++end;
          }
          const int block_y = static_cast<int>(end - pos) - block_x;
          for (std::size_t q = pos; q < end; ++q) {
            const std::uint16_t k = ord[q];
            le_x[k] = prefix_x + block_x;
            ge_x[k] = static_cast<int>(N) - prefix_x;
            le_y[k] = prefix_y + block_y;
            ge_y[k] = static_cast<int>(M) - prefix_y;
          }
          prefix_x += block_x;
          prefix_y += block_y;
          pos = end;
        }
        for (std::size_t k = 0; k < K; ++k) {
          sum_x[k] += std::min(le_x[k], ge_x[k]);
          sum_y[k] += std::min(le_y[k], ge_y[k]);
        }
      }
      for (std::size_t k = 0; k < K; ++k) {
        const double dx = static_cast<double>(sum_x[k]) / (static_cast<double>(px) * N);
        const double dy = static_cast<double>(sum_y[k]) / (static_cast<double>(px) * M);
        T.at(static_cast<std::size_t>(row), k) = dx - dy;
      }
      return;
    }

    SetSample ref_x(joined.grid), ref_y(joined.grid);
    for (std::size_t k = 0; k < N; ++k) ref_x.push_back(joined.sets[perm[k]]);
    for (std::size_t k = N; k < K; ++k) ref_y.push_back(joined.sets[perm[k]]);
    DepthConfig row_cfg = cfg;
    row_cfg.seed = root.derive(0xd3).derive(static_cast<std::uint64_t>(row)).next();
    DepthEngine engine_x(ref_x, row_cfg, 1);
    DepthEngine engine_y(ref_y, row_cfg, 1);
    const std::vector<double> dx = engine_x.evaluate(joined.sets);
    const std::vector<double> dy = engine_y.evaluate(joined.sets);
    for (std::size_t k = 0; k < K; ++k)
      T.at(static_cast<std::size_t>(row), k) = dx[k] - dy[k];
  });

  const RankMeasures rm = rank_measures(T);
  long long more_extreme = 0;
  for (std::size_t i = 0; i < n_rows; ++i)
    if (rm.area_measure[i] < rm.area_measure[0]) ++more_extreme;

  EnvelopeBand band = build_envelope(T, rm, alpha);

  EnvelopeTestResult result;
  result.T = std::move(T);
  result.area_measures = rm.area_measure;
  result.p_value = static_cast<double>(more_extreme) / static_cast<double>(n_rows);
  result.alpha = alpha;
  result.t_low = std::move(band.low);
  result.t_upp = std::move(band.upp);
  result.responsible = std::move(band.responsible);
  result.rejected = band.rejected;
  for (std::size_t k : result.responsible) result.responsible_ids.push_back(joined.ids[k]);
  result.config = cfg;
  result.permutations = permutations;
  return result;
}

}  // namespace setdepth
