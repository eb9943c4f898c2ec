#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace qss {

// splitmix64 finalizer, used to spread seed material before it reaches the
// engine. Good enough to decorrelate nearby (config, run) pairs.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of run `run_index` within configuration `config_index` of an
// experiment seeded with `seed_base`. Pure function, so any run can be
// reproduced in isolation.
constexpr std::uint64_t derive_run_seed(std::uint64_t seed_base,
                                        std::uint64_t config_index,
                                        std::uint64_t run_index) noexcept {
  constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
  const std::uint64_t s = mix64(seed_base + golden * (config_index + 1));
  return mix64(s + golden * (run_index + 1));
}

// Deterministic randomness source. Every random decision in the simulator
// draws from an injected Rng; there is no global generator. The helpers are
// hand-rolled on top of the raw engine output so that sequences do not
// depend on standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), unbiased via rejection.
  std::uint32_t uniform_below(std::uint32_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be >= 1");
    const std::uint64_t span = 1ULL << 32;
    const std::uint64_t limit = span - span % bound;
    for (;;) {
      const std::uint64_t x = next_u64() >> 32;
      if (x < limit) return static_cast<std::uint32_t>(x % bound);
    }
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qss
