#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace r2f::rng {

// Counter-based generator (Philox4x32-10). Every draw is a pure function of
// (seed, stream, unit, step, slot), so parallel evaluation order cannot change
// results and runs are bit-reproducible across platforms with IEEE doubles.

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
    ctr = {
        static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
        static_cast<std::uint32_t>(p1),
        static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
        static_cast<std::uint32_t>(p0),
    };
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint32_t stream,
                                          std::uint32_t unit, std::uint32_t step,
                                          std::uint32_t slot) {
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32),
  };
  return philox4x32({stream, unit, step, slot}, key);
}

// Maps 64 random bits to (0,1): 53-bit mantissa plus a half-ulp offset keeps
// the value strictly inside the open interval, which log() in Box-Muller needs.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

inline double uniform01(std::uint64_t seed, std::uint32_t stream, std::uint32_t unit,
                        std::uint32_t step, std::uint32_t slot) {
  const auto w = block(seed, stream, unit, step, slot);
  return to_unit((std::uint64_t(w[0]) << 32) | w[1]);
}

inline std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint32_t stream,
                                               std::uint32_t unit, std::uint32_t step,
                                               std::uint32_t slot) {
  const auto w = block(seed, stream, unit, step, slot);
  const double u1 = to_unit((std::uint64_t(w[0]) << 32) | w[1]);
  const double u2 = to_unit((std::uint64_t(w[2]) << 32) | w[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

inline double gaussian(std::uint64_t seed, std::uint32_t stream, std::uint32_t unit,
                       std::uint32_t step, std::uint32_t slot) {
  return gaussian_pair(seed, stream, unit, step, slot).first;
}

}  // namespace r2f::rng
