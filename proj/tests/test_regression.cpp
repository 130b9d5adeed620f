#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "setdepth/regression.hpp"
#include "setdepth/rng.hpp"

using namespace setdepth;

namespace {

DDPlot make_plot(const std::vector<std::pair<double, double>>& pts) {
  DDPlot plot;
  for (std::size_t i = 0; i < pts.size(); ++i)
    plot.points.push_back({std::to_string(i), 0, pts[i].first, pts[i].second});
  return plot;
}

}  // namespace

TEST_CASE("perfect diagonal fit never rejects") {
  DDPlot plot = make_plot({{0.1, 0.1}, {0.3, 0.3}, {0.5, 0.5}, {0.7, 0.7}, {0.9, 0.9}});
  const RegressionTestResult r = regression_test(plot, 200, 3);
  REQUIRE(r.beta0 == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(r.beta1 == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(r.p0 == 1.0);
  REQUIRE(r.p1 == 1.0);
  REQUIRE(r.p_adjusted == 1.0);
  REQUIRE_FALSE(r.reject(0.05));
}

TEST_CASE("flat shifted cloud rejects strongly") {
  Rng rng(5);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 120; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    const double y = 0.5 + 0.02 * rng.normal();
    pts.push_back({x, y});
  }
  const RegressionTestResult r = regression_test(make_plot(pts), 500, 7);
  REQUIRE(r.p_adjusted < 0.05);
  REQUIRE(r.reject(0.05));
}

TEST_CASE("diagonal cloud with noise does not reject") {
  Rng rng(11);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 150; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    pts.push_back({x, x + 0.05 * rng.normal()});
  }
  const RegressionTestResult r = regression_test(make_plot(pts), 500, 7);
  REQUIRE(r.p_adjusted > 0.05);
}

TEST_CASE("holm-bonferroni combination") {
  Rng rng(13);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 80; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    pts.push_back({x, x + 0.1 * rng.normal()});
  }
  const RegressionTestResult r = regression_test(make_plot(pts), 300, 17);
  const double lo = std::min(r.p0, r.p1), hi = std::max(r.p0, r.p1);
  REQUIRE(r.p_adjusted == std::min(2.0 * lo, hi));
  // the adjusted p rejects iff the Holm rule does
  for (double alpha : {0.01, 0.05, 0.1})
    REQUIRE(r.reject(alpha) == (lo < alpha / 2.0 || hi < alpha));
}

TEST_CASE("input validation") {
  REQUIRE_THROWS_AS(regression_test(make_plot({{0.1, 0.2}, {0.3, 0.4}}), 100, 1),
                    std::invalid_argument);
  // degenerate regressor: every depth_x identical
  REQUIRE_THROWS_AS(regression_test(make_plot({{0.4, 0.2}, {0.4, 0.5}, {0.4, 0.6}}), 100, 1),
                    std::invalid_argument);
}

TEST_CASE("deterministic under a fixed seed") {
  Rng rng(23);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 60; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    pts.push_back({x, 0.9 * x + 0.05 + 0.05 * rng.normal()});
  }
  const DDPlot plot = make_plot(pts);
  const RegressionTestResult a = regression_test(plot, 400, 99);
  const RegressionTestResult b = regression_test(plot, 400, 99);
  REQUIRE(a.p0 == b.p0);
  REQUIRE(a.p1 == b.p1);
  REQUIRE(a.p_adjusted == b.p_adjusted);
}
