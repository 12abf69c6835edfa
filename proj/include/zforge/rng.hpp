#pragma once

#include <cstdint>
#include <random>

namespace zforge {

// Seedable, splittable generator. The engine is mt19937_64 (bit-exact across
// standard libraries); bounded draws use our own rejection step because
// std::uniform_int_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound);

  // Independent child stream; depends only on (seed, stream).
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace zforge
