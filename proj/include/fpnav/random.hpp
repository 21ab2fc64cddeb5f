#pragma once

#include <cstddef>
#include <cstdint>

namespace fpnav {

// Counter-based draws: every value is a pure function of
// (seed, index, slot), so adding a draw never shifts any other.
std::uint64_t hash_key(std::uint64_t seed, std::uint64_t index, std::uint64_t slot);

// Uniform in the open interval (0, 1).
double keyed_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t slot);

// Standard normal via Box-Muller over two keyed uniforms.
double keyed_normal(std::uint64_t seed, std::uint64_t index, std::uint64_t slot);

// Small sequential generator for procedural content. Distributions are
// implemented here rather than via <random> so streams are identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return hash_key(seed_, counter_++, 0x5eedull); }
  double uniform() { return keyed_uniform(seed_, counter_++, 0x5eedull); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return keyed_normal(seed_, counter_++, 0x5eedull); }
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace fpnav
