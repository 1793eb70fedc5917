#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stance {

// Seeded random source. Every stochastic routine in the library takes one of
// these explicitly so runs are reproducible from a single integer seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for a (seed, stream-id) pair, e.g. one per fold.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);
  static Rng derive(std::uint64_t seed, std::string_view label, std::uint64_t stream = 0);

  // Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);
  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double stddev = 1.0);
  bool bernoulli(double p);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace stance
