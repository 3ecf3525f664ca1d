#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "ecot/matrix.hpp"

namespace ecot {

// SplitMix64 (Steele, Lea, Flood 2014). State advances by 0x9E3779B97F4A7C15
// and each output is the standard 30/27/31 xor-shift-multiply finalizer.
// The generator is fixed so parameter fixtures reproduce bit-exactly across
// implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform double in the open interval (0, 1): ((x >> 11) + 0.5) * 2^-53.
  double next_open_unit();

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a of the block name, xor-ed into the base seed and passed
// through one SplitMix64 step. Every named parameter block gets its own
// stream this way.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view block_name);

// rows x cols matrix with entries uniform in (-r, r), r = 1/sqrt(fan_in),
// filled in row-major order from SplitMix64(seed). fan_in defaults to cols.
DenseMatrix seeded_init(std::size_t rows, std::size_t cols, std::uint64_t seed);
DenseMatrix seeded_init(std::size_t rows, std::size_t cols, std::uint64_t seed,
                        std::size_t fan_in);

}  // namespace ecot
