#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace minordiff {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Streams are cheap: a (seed, stream) pair addresses an independent
/// sequence, so parallel Monte Carlo trials can each own the substream
/// (master_seed, trial_index) without coordination.
class Philox {
 public:
  Philox() : Philox(0, 0) {}
  Philox(std::uint64_t seed, std::uint64_t stream) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    stream_[0] = static_cast<std::uint32_t>(stream);
    stream_[1] = static_cast<std::uint32_t>(stream >> 32);
  }

  using result_type = std::uint32_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  std::uint32_t operator()() { return next_u32(); }

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      block_ = block(counter_, stream_, key_);
      ++counter_;
      pos_ = 0;
    }
    return block_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; generates pairs and caches one.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // u1 in (0,1]: avoids log(0)
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  /// Complex standard normal, E|u|^2 = 1, E u^2 = 0.
  std::complex<double> complex_normal() {
    const double s = 0.70710678118654752440;  // 1/sqrt(2)
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  /// Raw 4x32 block for a given 64-bit counter; exposed for tests
  /// against the published Philox4x32-10 vectors.
  static std::array<std::uint32_t, 4> block(std::uint64_t ctr,
                                            const std::array<std::uint32_t, 2>& strm,
                                            std::array<std::uint32_t, 2> key) {
    std::array<std::uint32_t, 4> c = {static_cast<std::uint32_t>(ctr),
                                      static_cast<std::uint32_t>(ctr >> 32), strm[0], strm[1]};
    for (int round = 0; round < 10; ++round) {
      c = single_round(c, key);
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return c;
  }

  static std::array<std::uint32_t, 4> raw_block(const std::array<std::uint32_t, 4>& ctr,
                                                std::array<std::uint32_t, 2> key) {
    std::array<std::uint32_t, 4> c = ctr;
    for (int round = 0; round < 10; ++round) {
      c = single_round(c, key);
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return c;
  }

 private:
  static std::array<std::uint32_t, 4> single_round(const std::array<std::uint32_t, 4>& c,
                                                   const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c[0];
    const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 2> stream_{};
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace minordiff
