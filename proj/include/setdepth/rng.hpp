#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace setdepth {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Small, fully portable PRNG (xoshiro256++) with splittable streams.
/// All draws are implemented here rather than via <random> distributions,
/// so results are bit-identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : root_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = detail::splitmix64(sm);
  }

  /// Independent child stream. Streams derived with distinct ids from the
  /// same parent never share state, so replicates may run in any order.
  Rng derive(std::uint64_t stream_id) const {
    std::uint64_t sm = root_ ^ (0x6a09e667f3bcc909ULL + stream_id * 0x9e3779b97f4a7c15ULL);
    std::uint64_t mixed = detail::splitmix64(sm);
    mixed ^= detail::splitmix64(sm);
    return Rng(mixed);
  }

  std::uint64_t next() {
    const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via the Marsaglia polar method (second value discarded
  /// to keep the draw count per call fixed).
  double normal() {
    for (;;) {
      double u = 2.0 * uniform() - 1.0;
      double v = 2.0 * uniform() - 1.0;
      double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  /// Poisson by inversion; large means are split so exp(-lambda) stays
  /// representable.
  long poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("Rng::poisson: negative mean");
    if (lambda == 0.0) return 0;
    if (lambda > 500.0) return poisson(lambda / 2.0) + poisson(lambda / 2.0);
    const double limit = std::exp(-lambda);
    long k = 0;
    double product = uniform();
    while (product > limit) {
      ++k;
      product *= uniform();
    }
    return k;
  }

  /// k distinct indices from [0, n), by partial Fisher-Yates. Order is part
  /// of the draw (not sorted).
  std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k) {
    if (k > n) throw std::invalid_argument("Rng::sample_without_replacement: k > n");
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint32_t i = 0; i < k; ++i) {
      std::uint32_t j = i + static_cast<std::uint32_t>(below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

  /// Uniform random permutation of [0, n) by Fisher-Yates.
  std::vector<std::uint32_t> permutation(std::uint32_t n) {
    return sample_without_replacement(n, n);
  }

 private:
  std::uint64_t root_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace setdepth
