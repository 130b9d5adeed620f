#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "setdepth/ddplot.hpp"
#include "setdepth/parallel.hpp"
#include "setdepth/rng.hpp"

namespace setdepth {

/// DD-plot regression test result. Under equality in distribution the
/// regression of depth_y on depth_x has intercept 0 and slope 1; the
/// bootstrap-t p-values for those two hypotheses are combined by
/// Holm-Bonferroni into p_adjusted = min{2 p_(1), p_(2)}.
struct RegressionTestResult {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double p0 = 1.0;
  double p1 = 1.0;
  double p_adjusted = 1.0;
  int bootstrap_B = 0;

  bool reject(double alpha) const { return p_adjusted < alpha; }
};

namespace detail {

struct OlsFit {
  double b0 = 0.0, b1 = 0.0;
  double se0 = 0.0, se1 = 0.0;  // heteroskedasticity-robust (HC1)
  bool degenerate = false;
};

inline OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  OlsFit fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 1e-15 * static_cast<double>(n)) {
    fit.degenerate = true;
    return fit;
  }
  fit.b1 = sxy / sxx;
  fit.b0 = my - fit.b1 * mx;

  // Sandwich variance with the n/(n-2) small-sample factor, via the
  // influence weights of the two coefficients.
  double v1 = 0.0, v0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - fit.b0 - fit.b1 * x[i];
    const double dx = x[i] - mx;
    const double w1 = dx / sxx;
    const double w0 = 1.0 / static_cast<double>(n) - mx * dx / sxx;
    v1 += w1 * w1 * e * e;
    v0 += w0 * w0 * e * e;
  }
  const double correction =
      n > 2 ? static_cast<double>(n) / static_cast<double>(n - 2) : 1.0;
  fit.se1 = std::sqrt(correction * v1);
  fit.se0 = std::sqrt(correction * v0);
  return fit;
}

inline double safe_t(double numerator, double se) {
  if (se > 0.0) return numerator / se;
  if (numerator == 0.0) return 0.0;
  return numerator > 0.0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Bootstrap-t test of beta0 = 0, beta1 = 1 in depth_y = b0 + b1 depth_x;
/// point pairs are resampled with replacement. Needs at least three points
/// with non-degenerate depth_x variance.
inline RegressionTestResult regression_test(const DDPlot& plot, int bootstrap_B,
                                            std::uint64_t seed, int threads = 1) {
  const std::size_t n = plot.points.size();
  if (n < 3) throw std::invalid_argument("regression_test: need at least 3 points");
  if (bootstrap_B < 1) throw std::invalid_argument("regression_test: bootstrap_B must be >= 1");
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = plot.points[i].depth_x;
    y[i] = plot.points[i].depth_y;
  }
  const detail::OlsFit fit = detail::ols_fit(x, y);
  if (fit.degenerate)
    throw std::invalid_argument("regression_test: depth_x has no variance");

  const double t0 = detail::safe_t(fit.b0 - 0.0, fit.se0);
  const double t1 = detail::safe_t(fit.b1 - 1.0, fit.se1);

  std::vector<double> t0_star(static_cast<std::size_t>(bootstrap_B));
  std::vector<double> t1_star(static_cast<std::size_t>(bootstrap_B));
  const Rng root = Rng(seed).derive(0xb0);
  parallel_for(bootstrap_B, threads, [&](std::int64_t b) {
    Rng rng = root.derive(static_cast<std::uint64_t>(b));
    std::vector<double> xb(n), yb(n);
    detail::OlsFit fb;
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = rng.below(n);
        xb[i] = x[j];
        yb[i] = y[j];
      }
      fb = detail::ols_fit(xb, yb);
      if (!fb.degenerate) break;
    }
    if (fb.degenerate) {
      t0_star[static_cast<std::size_t>(b)] = 0.0;
      t1_star[static_cast<std::size_t>(b)] = 0.0;
      return;
    }
    t0_star[static_cast<std::size_t>(b)] = detail::safe_t(fb.b0 - fit.b0, fb.se0);
    t1_star[static_cast<std::size_t>(b)] = detail::safe_t(fb.b1 - fit.b1, fb.se1);
  });

  auto bootstrap_p = [bootstrap_B](const std::vector<double>& t_star, double t_obs) {
    long long count = 0;
    for (double t : t_star)
      if (std::abs(t) >= std::abs(t_obs)) ++count;
    return static_cast<double>(count) / static_cast<double>(bootstrap_B);
  };

  RegressionTestResult result;
  result.beta0 = fit.b0;
  result.beta1 = fit.b1;
  result.p0 = bootstrap_p(t0_star, t0);
  result.p1 = bootstrap_p(t1_star, t1);
  const double p_lo = std::min(result.p0, result.p1);
  const double p_hi = std::max(result.p0, result.p1);
  result.p_adjusted = std::min(2.0 * p_lo, p_hi);
  result.bootstrap_B = bootstrap_B;
  return result;
}

}  // namespace setdepth
