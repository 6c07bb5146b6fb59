#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace peakcap {

// Counter-based substream generator. Every draw is a pure function of
// (seed, stream, tag, counter), so Monte Carlo results are bit-identical
// regardless of evaluation order or how samples are split across threads.
// The mixing function is the splitmix64 finalizer, which is invertible and
// passes standard statistical batteries when driven by a Weyl sequence.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag = 0)
      : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull * stream) ^ mix(tag ^ 0xd1b54a32d192ed03ull))),
        counter_(0) {}

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ull;
    return mix(z);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs of
  // uniforms stay finite.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Phase uniform on [0, 2*pi).
  double next_phase() {
    return 2.0 * M_PI * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
  }

  // Circularly symmetric complex Gaussian, unit total variance E|z|^2 = 1
  // (each real part has variance 1/2).
  std::complex<double> next_cn() {
    const double r = std::sqrt(-std::log(next_unit()));
    const double ph = next_phase();
    return {r * std::cos(ph), r * std::sin(ph)};
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace peakcap
