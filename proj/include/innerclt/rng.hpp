#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al., SC 2011).
// A draw is a pure function of (seed, counter), so parallel sampling is
// reproducible no matter how indices are distributed over workers.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace innerclt::rng {

using Block = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

namespace detail {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                       std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

constexpr Block round(const Block& x, const Key& k) {
  std::uint32_t hi0 = 0, lo0 = 0, hi1 = 0, lo1 = 0;
  mulhilo(kMul0, x[0], hi0, lo0);
  mulhilo(kMul1, x[2], hi1, lo1);
  return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace detail

/// Philox4x32 with 10 rounds.
constexpr Block philox4x32(Block ctr, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += detail::kWeyl0;
      key[1] += detail::kWeyl1;
    }
    ctr = detail::round(ctr, key);
  }
  return ctr;
}

/// Four 32-bit words for draw `index` of `stream` under `seed`.
constexpr Block draw(std::uint64_t seed, std::uint64_t index,
                     std::uint32_t stream = 0) {
  const Block ctr{static_cast<std::uint32_t>(index),
                  static_cast<std::uint32_t>(index >> 32), stream, 0u};
  const Key key{static_cast<std::uint32_t>(seed),
                static_cast<std::uint32_t>(seed >> 32)};
  return philox4x32(ctr, key);
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint32_t lo, std::uint32_t hi) {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t index,
                      std::uint32_t stream = 0) {
  const Block b = draw(seed, index, stream);
  return to_unit(b[0], b[1]);
}

/// Uniform angle in [0, 2π).
inline double uniform_angle(std::uint64_t seed, std::uint64_t index,
                            std::uint32_t stream = 0) {
  return 2.0 * std::numbers::pi * uniform(seed, index, stream);
}

/// Pair of independent standard normals (Box–Muller on one Philox block).
inline std::array<double, 2> normal_pair(std::uint64_t seed,
                                         std::uint64_t index,
                                         std::uint32_t stream = 0) {
  const Block b = draw(seed, index, stream);
  const double u1 = 1.0 - to_unit(b[0], b[1]);  // (0, 1]
  const double u2 = to_unit(b[2], b[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

/// ±1 with equal probability.
inline int sign(std::uint64_t seed, std::uint64_t index,
                std::uint32_t stream = 0) {
  return (draw(seed, index, stream)[0] & 1u) ? 1 : -1;
}

}  // namespace innerclt::rng
