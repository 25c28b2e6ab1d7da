#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace hybridburst {

namespace detail {

/// Stafford "mix13" finalizer; bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Derive an independent stream seed from (master seed, counter).
///
/// Streams derived from distinct counters are statistically independent for
/// Monte Carlo purposes and the derivation is order-free, so work can be
/// partitioned across threads without changing results.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return detail::mix64(master + detail::kGoldenGamma * (counter + 1));
}

/// splitmix64 stream (Java SplittableRandom core).
///
/// Small, fast, fully portable; every sampler below is written against raw
/// 64-bit output so traces are bit-reproducible across platforms.
class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    state_ += detail::kGoldenGamma;
    return detail::mix64(state_);
  }

  /// Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Bernoulli(p).
  bool bernoulli(double p) { return uniform_open01() < p; }

  /// Exponential with the given mean.
  double exponential(double mean) { return -mean * std::log(uniform_open01()); }

  /// Standard normal (Box-Muller, one member of the pair).
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open01()));
    return r * std::cos(6.283185307179586476925287 * uniform_open01());
  }

  /// Poisson count via exponential inter-arrival sums; O(mean).
  std::uint64_t poisson(double mean) {
    std::uint64_t k = 0;
    double s = exponential(1.0);
    while (s < mean) {
      ++k;
      s += exponential(1.0);
    }
    return k;
  }

  /// Split off an independent child stream.
  RandomStream split(std::uint64_t counter) const {
    return RandomStream(derive_seed(state_, counter));
  }

 private:
  std::uint64_t state_;
};

/// Fill a span with standard normals, consuming Box-Muller pairs.
inline void fill_normals(RandomStream& rng, std::span<double> out) {
  constexpr double two_pi = 6.283185307179586476925287;
  std::size_t i = 0;
  for (; i + 1 < out.size(); i += 2) {
    const double r = std::sqrt(-2.0 * std::log(rng.uniform_open01()));
    const double t = two_pi * rng.uniform_open01();
    out[i] = r * std::cos(t);
    out[i + 1] = r * std::sin(t);
  }
  if (i < out.size()) out[i] = rng.normal();
}

}  // namespace hybridburst
