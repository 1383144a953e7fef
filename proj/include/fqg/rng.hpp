#pragma once

// Counter-based deterministic random source.  Every randomized routine in the
// library draws from one of these, seeded from the caller's configuration, so
// repeated runs with the same seed are bit-identical and independent streams
// can be forked by label without sharing state.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

namespace fqg {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed = 0) : seed_(seed) {}

  /// Derive an independent stream; deterministic in (seed, label).
  CounterRng fork(std::string_view label) const {
    std::uint64_t h = seed_ ^ 0x6a09e667f3bcc909ULL;
    for (char c : label) h = detail::splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    return CounterRng(h);
  }
  CounterRng fork(std::uint64_t label) const {
    return CounterRng(detail::splitmix64(seed_ ^ detail::splitmix64(label + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next_u64() { return detail::splitmix64(seed_ ^ detail::splitmix64(++counter_)); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Box-Muller).
  double normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::complex<double> cnormal() { return {normal(), normal()}; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace fqg
