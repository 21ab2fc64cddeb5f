#include "fpnav/random.hpp"

#include <cmath>
#include <numbers>

namespace fpnav {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash_key(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
  return splitmix64(splitmix64(splitmix64(seed) ^ index) ^ slot);
}

double keyed_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
  const std::uint64_t bits = hash_key(seed, index, slot) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double keyed_normal(std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
  const double u1 = keyed_uniform(seed, index, 2 * slot);
  const double u2 = keyed_uniform(seed, index, 2 * slot + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fpnav
