#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace dicomo {

/// Sequential stream used for graph and sequence generation.
using Rng = std::mt19937_64;

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds `tags` into `base`. Used for every derived seed (records, runs, blocks)
/// so that a result depends only on its coordinates, never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(base);
  for (auto t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

/// Counter-style generator for per-run Monte Carlo substreams.
///
/// std::mt19937_64 costs ~1us to seed, which dominates when every one of
/// 10^7 runs needs its own stream. This is splitmix64 used as an engine:
/// O(1) seeding, 2^64 period, satisfies UniformRandomBitGenerator.
class RunStream {
public:
  using result_type = std::uint64_t;

  explicit constexpr RunStream(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

/// Uniform double in [0,1) with 53 random bits.
template <class URBG>
inline double uniform01(URBG& g) {
  static_assert(URBG::max() - URBG::min() == std::numeric_limits<std::uint64_t>::max());
  return static_cast<double>((g() - URBG::min()) >> 11) * 0x1.0p-53;
}

} // namespace dicomo
