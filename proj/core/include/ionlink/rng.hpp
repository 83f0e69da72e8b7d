#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ionlink {

// Philox4x32-10 counter-based random generator.
//
// Every (key, stream) pair is an independent substream, and any draw is a
// pure function of (key, stream, counter).  Monte Carlo code derives one
// stream per trial (pulse, run, shot, ...) from the master seed, so merged
// results do not depend on scheduling or worker count.
class Philox4x32 {
 public:
  explicit Philox4x32(std::uint64_t key, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {
    refill();
  }

  std::uint64_t next_u64() {
    if (index_ >= 2) {
      bump_counter();
      refill();
    }
    const std::uint64_t lo = block_[2 * index_];
    const std::uint64_t hi = block_[2 * index_ + 1];
    ++index_;
    return lo | (hi << 32);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  // Number of Bernoulli(p) attempts up to and including the first success.
  std::uint64_t geometric_trials(double p) {
    if (p >= 1.0) return 1;
    const double u = uniform();
    const double k = std::floor(std::log1p(-u) / std::log1p(-p));
    return static_cast<std::uint64_t>(k) + 1;
  }

  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 25.0) {  // split so exp(-chunk) stays well away from underflow
      total += poisson_knuth(25.0);
      mean -= 25.0;
    }
    return total + poisson_knuth(mean);
  }

  bool coin() { return (next_u64() & 1u) != 0; }

 private:
  std::uint64_t poisson_knuth(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= uniform();
    } while (prod > limit);
    return k - 1;
  }

  static std::uint32_t mul_hi(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b)) >> 32);
  }

  void bump_counter() {
    if (++counter_[0] == 0) ++counter_[1];
  }

  void refill() {
    std::array<std::uint32_t, 4> c = counter_;
    std::array<std::uint32_t, 2> k = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint32_t hi0 = mul_hi(kMul0, c[0]);
      const std::uint32_t lo0 = kMul0 * c[0];
      const std::uint32_t hi1 = mul_hi(kMul1, c[2]);
      const std::uint32_t lo1 = kMul1 * c[2];
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    block_ = c;
    index_ = 0;
  }

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int index_ = 0;
};

}  // namespace ionlink
