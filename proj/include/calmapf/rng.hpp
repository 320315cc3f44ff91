/*
 * seeded random source
 *
 * Wraps std::mt19937_64 but draws bounded integers and reals with explicit
 * arithmetic so sequences are identical across standard libraries.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace calmapf {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x);

// Seed of a named sub-stream of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::uint64_t index = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // uniform in [0, bound), bound > 0
  std::uint64_t below(std::uint64_t bound);

  // uniform in [0, 1)
  double uniform();

  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates from the back, drawing below(i + 1) for i = n-1 .. 1.
  template <typename T>
  void shuffle(std::vector<T>& v)
  {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace calmapf
