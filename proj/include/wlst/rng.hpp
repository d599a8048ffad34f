#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wlst {

// 64-bit mix finalizer used to whiten (seed, stream id) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One independent random stream. Streams built from the same seed but
// different ids are decorrelated. Every call consumes a fixed number of
// engine words, so a draw sequence is reproducible across platforms and
// independent of how particles are scheduled onto workers.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : gen_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id ^ 0x9d2c5680dd510a95ULL))) {}

  // Uniform on [0, 1) with 53-bit resolution. One engine word.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller. Always two engine words; the sine
  // half of the pair is discarded rather than cached.
  double normal() {
    const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Uniform on {0, ..., n-1}. One engine word.
  int uniform_int(int n) {
    const int k = static_cast<int>(uniform() * n);
    return k < n ? k : n - 1;
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 gen_;
};

}  // namespace wlst
