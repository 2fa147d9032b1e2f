#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace defistress {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block of four
// 32-bit outputs is a pure function of (counter, key), so any stream position
// can be computed without touching the others.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      const std::uint64_t p0 = std::uint64_t{kMulA} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMulB} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85;
};

// Standard-normal draws for one substream identified by
// (master_seed, stream_index, asset_index). Each Philox block yields two
// 53-bit uniforms and hence one Box-Muller pair; draw k of the stream depends
// only on k and the identifiers.
class NormalStream {
 public:
  NormalStream(std::uint64_t master_seed, std::uint32_t stream_index,
               std::uint32_t asset_index) noexcept
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        stream_(stream_index),
        asset_(asset_index) {}

  double next() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto out = Philox4x32::block(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         stream_, asset_},
        key_);
    ++block_;
    // u1 in (0, 1] keeps the log finite; u2 in [0, 1).
    const double u1 = 1.0 - to_unit(out[0], out[1]);
    const double u2 = to_unit(out[2], out[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform on [0, 1), consuming a whole block (used by the contagion sampler).
  double next_uniform() noexcept {
    const auto out = Philox4x32::block(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         stream_, asset_},
        key_);
    ++block_;
    have_spare_ = false;
    return to_unit(out[0], out[1]);
  }

 private:
  static double to_unit(std::uint32_t lo, std::uint32_t hi) noexcept {
    const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint32_t asset_;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace defistress
