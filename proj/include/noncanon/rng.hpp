#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace noncanon {

using BigInt = boost::multiprecision::cpp_int;

// Seeded mt19937_64 generator. Bounded and real draws go through the helpers
// below, so output is identical across standard libraries.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64";

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, bound) for arbitrary-precision bounds > 0.
  BigInt below(const BigInt& bound);

  // Uniform in [0, 1) with 53 random bits.
  double unit();

  // True with probability p; p <= 0 is never, p >= 1 is always.
  bool bernoulli(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for an independent stream keyed by (global seed, record key, index),
// so results do not depend on processing order.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key, std::uint64_t index = 0);

}  // namespace noncanon
