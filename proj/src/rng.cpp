#include "ecot/rng.hpp"

#include <cmath>

#include "ecot/error.hpp"

namespace ecot {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_open_unit() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view block_name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : block_name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return SplitMix64(base_seed ^ h).next();
}

DenseMatrix seeded_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  return seeded_init(rows, cols, seed, cols);
}

DenseMatrix seeded_init(std::size_t rows, std::size_t cols, std::uint64_t seed,
                        std::size_t fan_in) {
  if (rows == 0 || cols == 0 || fan_in == 0)
    throw ContractViolation("seeded_init: dimensions must be positive");
  const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
  SplitMix64 gen(seed);
  DenseMatrix out(rows, cols);
  for (double& x : out.entries()) x = r * (2.0 * gen.next_open_unit() - 1.0);
  return out;
}

}  // namespace ecot
