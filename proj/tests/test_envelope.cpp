#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "setdepth/envelope.hpp"
#include "setdepth/simulate.hpp"
#include "test_util.hpp"

using namespace setdepth;
using namespace setdepth::testutil;

namespace {

StatMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  StatMatrix T(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[0].size(); ++k) T.at(i, k) = rows[i][k];
  return T;
}

DepthConfig band_cfg(int n, long long s, std::uint64_t seed = 5) {
  DepthConfig cfg;
  cfg.kind = DepthKind::band;
  cfg.n = n;
  cfg.s = s;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("pointwise ranks on a hand-computable column") {
  // column (3, 1, 2): ascending ranks (3,1,2), descending (1,3,2),
  // two-sided minimum (1,1,2)
  const StatMatrix T = from_rows({{3.0}, {1.0}, {2.0}});
  const RankMeasures rm = rank_measures(T);
  REQUIRE(rm.extreme_rank == std::vector<int>{1, 1, 2});
  REQUIRE(rm.observed_pointwise == std::vector<int>{1});
}

TEST_CASE("continuous ranks on a strictly monotone column") {
  // column (1,2,3,4): interior continuous ranks 1.5 and 2.5; endpoints use
  // the exponential forms; with K = 1 the area measure is min(R, C)/n.
  const StatMatrix T = from_rows({{1.0}, {2.0}, {3.0}, {4.0}});
  const RankMeasures rm = rank_measures(T);
  const double c1 = std::exp(-1.0 / 3.0);
  const double c4 = 4.0 - std::exp(-0.5);
  REQUIRE(rm.area_measure[0] == Catch::Approx(std::min(1.0, c1) / 4.0));
  REQUIRE(rm.area_measure[1] == Catch::Approx(std::min(2.0, 1.5) / 4.0));
  REQUIRE(rm.area_measure[2] == Catch::Approx(std::min(2.0, 4.0 - 2.5) / 4.0));
  REQUIRE(rm.area_measure[3] == Catch::Approx(std::min(1.0, 4.0 - c4) / 4.0));
}

TEST_CASE("rank measures are invariant under column-wise shifts") {
  Rng rng(3);
  StatMatrix T(6, 4);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t k = 0; k < 4; ++k) T.at(i, k) = rng.uniform(-1.0, 1.0);
  const RankMeasures rm0 = rank_measures(T);
  StatMatrix shifted = T;
  const double offsets[4] = {10.0, -3.0, 0.25, 100.0};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t k = 0; k < 4; ++k) shifted.at(i, k) += offsets[k];
  const RankMeasures rm1 = rank_measures(shifted);
  REQUIRE(rm0.extreme_rank == rm1.extreme_rank);
  for (std::size_t i = 0; i < 6; ++i)
    REQUIRE(rm0.area_measure[i] == Catch::Approx(rm1.area_measure[i]));
}

TEST_CASE("area measure refines the extreme rank") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    StatMatrix T(6, 4);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t k = 0; k < 4; ++k) T.at(i, k) = rng.uniform(0.0, 1.0);
    const RankMeasures rm = rank_measures(T);
    // nesting: a_i in ((R_i - 1)/n, R_i/n]
    for (std::size_t i = 0; i < 6; ++i) {
      REQUIRE(rm.area_measure[i] <= rm.extreme_rank[i] / 6.0 + 1e-12);
      REQUIRE(rm.area_measure[i] >= (rm.extreme_rank[i] - 1) / 6.0 - 1e-12);
    }
    // the area minimiser is among the extreme-rank minimisers
    const std::size_t arg_a =
        std::min_element(rm.area_measure.begin(), rm.area_measure.end()) -
        rm.area_measure.begin();
    const int min_r = *std::min_element(rm.extreme_rank.begin(), rm.extreme_rank.end());
    REQUIRE(rm.extreme_rank[arg_a] == min_r);
  }
}

TEST_CASE("degenerate columns take the midpoint continuous rank") {
  const StatMatrix T = from_rows({{1.0, 5.0}, {1.0, 2.0}, {1.0, 3.0}});
  REQUIRE_NOTHROW(rank_measures(T));
  const RankMeasures rm = rank_measures(T);
  for (double a : rm.area_measure) {
    REQUIRE(a >= 0.0);
    REQUIRE(a <= 1.0 + 1e-12);
  }
}

TEST_CASE("envelope construction") {
  SECTION("identical curves never exit their own envelope") {
    StatMatrix T(5, 3);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t k = 0; k < 3; ++k) T.at(i, k) = 1.0;
    const RankMeasures rm = rank_measures(T);
    const EnvelopeBand band = build_envelope(T, rm, 0.2);
    REQUIRE(band.responsible.empty());
    REQUIRE_FALSE(band.rejected);
  }

  SECTION("an observed row strictly inside all others is never responsible") {
    const StatMatrix T = from_rows({{0.0, 0.0, 0.0},
                                    {1.0, 2.0, 1.5},
                                    {-1.0, -2.0, -1.5},
                                    {2.0, 1.0, 2.5},
                                    {-2.0, -1.0, -2.5}});
    const RankMeasures rm = rank_measures(T);
    const EnvelopeBand band = build_envelope(T, rm, 0.2);
    REQUIRE(band.responsible.empty());
    REQUIRE_FALSE(band.rejected);
  }

  SECTION("a hand-built matrix locates the responsible coordinate") {
    // row 0 is extreme only at k = 1
    const StatMatrix T = from_rows({{0.1, 9.0, -0.1},
                                    {0.3, 1.0, 0.2},
                                    {-0.2, 0.5, 0.4},
                                    {0.2, -0.5, -0.3},
                                    {-0.1, 0.0, 0.1}});
    const RankMeasures rm = rank_measures(T);
    const EnvelopeBand band = build_envelope(T, rm, 0.2);
    REQUIRE(band.rejected);
    REQUIRE(band.responsible == std::vector<std::size_t>{1});
  }

  SECTION("too small an alpha for the permutation count") {
    const StatMatrix T = from_rows({{1.0}, {2.0}, {3.0}});
    const RankMeasures rm = rank_measures(T);
    REQUIRE_THROWS_AS(build_envelope(T, rm, 0.05), std::invalid_argument);
  }
}

TEST_CASE("rejection, p-value and envelope exits are coherent") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 10 + rng.below(15);
    const std::size_t K = 2 + rng.below(6);
    StatMatrix T(n, K);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < K; ++k) T.at(i, k) = rng.uniform(-1.0, 1.0);
    const RankMeasures rm = rank_measures(T);
    const double alpha = 0.2;
    const EnvelopeBand band = build_envelope(T, rm, alpha);
    long long smaller = 0;
    for (double a : rm.area_measure)
      if (a < rm.area_measure[0]) ++smaller;
    const double p = static_cast<double>(smaller) / static_cast<double>(n);
    const std::size_t reject_count =
        static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
    // the rejection region holds exactly the reject_count most extreme curves
    REQUIRE(band.rejected == (static_cast<std::size_t>(smaller) < reject_count));
    REQUIRE(band.rejected == !band.responsible.empty());
    if (!band.rejected) REQUIRE(p >= static_cast<double>(reject_count) / n);
  }
}

TEST_CASE("envelope test end to end") {
  const Grid g{48, 48, 1.0};

  SECTION("smallest legal run stays well-formed") {
    const SetSample x = gen_disc_sample(4, 2, 4, g, 1);
    const SetSample y = gen_disc_sample(4, 2, 4, g, 2);
    const EnvelopeTestResult r = envelope_test(x, y, band_cfg(2, 20), 1, 0.5, 9);
    REQUIRE((r.p_value == 0.0 || r.p_value == 0.5));
    REQUIRE(r.T.rows == 2);
    REQUIRE(r.T.cols == 8);
    for (std::size_t k = 0; k < r.T.cols; ++k) REQUIRE(r.t_low[k] <= r.t_upp[k]);
  }

  SECTION("identically generated samples rarely reject") {
    const SetSample x = gen_disc_sample(12, 2, 4, g, 21);
    const SetSample y = gen_disc_sample(12, 2, 4, g, 22);
    const EnvelopeTestResult r = envelope_test(x, y, band_cfg(3, 100), 19, 0.2, 3);
    REQUIRE(r.p_value >= 0.0);
    REQUIRE(r.p_value <= 1.0);
    REQUIRE(r.rejected == !r.responsible.empty());
  }

  SECTION("a disc sample against a mixture flags annuli as responsible") {
    const SetSample x = gen_disc_sample(50, 8, 10, g, 65);
    const MixtureSample mix = gen_mixture_disc_annulus(50, 0.3, g, 66);
    const EnvelopeTestResult r = envelope_test(x, mix.sample, band_cfg(8, 500), 99, 0.05, 7);
    REQUIRE(r.p_value <= 0.05);
    REQUIRE(r.rejected);
    bool annulus_responsible = false;
    for (std::size_t k : r.responsible)
      for (std::size_t a : mix.annulus_indices)
        if (k == x.size() + a) annulus_responsible = true;
    REQUIRE(annulus_responsible);
  }

  SECTION("determinism and permutation-count validation") {
    const SetSample x = gen_disc_sample(8, 2, 4, g, 41);
    const SetSample y = gen_disc_sample(8, 2, 4, g, 42);
    const EnvelopeTestResult a = envelope_test(x, y, band_cfg(3, 50), 19, 0.2, 11);
    const EnvelopeTestResult b = envelope_test(x, y, band_cfg(3, 50), 19, 0.2, 11);
    REQUIRE(a.p_value == b.p_value);
    REQUIRE(a.responsible == b.responsible);
    REQUIRE_THROWS_AS(envelope_test(x, y, band_cfg(3, 50), 5, 0.05, 11),
                      std::invalid_argument);
  }

  SECTION("signed-distance fast path agrees with the generic engine") {
    const SetSample x = gen_disc_sample(6, 3, 5, g, 51);
    const SetSample y = gen_disc_sample(7, 3, 5, g, 52);
    DepthConfig cfg;
    cfg.kind = DepthKind::signed_distance;
    cfg.fd_order = 1;
    const EnvelopeTestResult r = envelope_test(x, y, cfg, 9, 0.5, 13);
    // row 0 must reproduce the plain engine evaluation
    DepthEngine ex(x, cfg), ey(y, cfg);
    const SetSample joined = joined_sample(x, y);
    const auto dx = ex.evaluate(joined);
    const auto dy = ey.evaluate(joined);
    for (std::size_t k = 0; k < joined.size(); ++k)
      REQUIRE(r.T.at(0, k) == Catch::Approx(dx[k] - dy[k]).epsilon(1e-12));
  }
}
