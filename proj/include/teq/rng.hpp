// Deterministic counter-keyed random number generator.
//
// Campaign outputs must be byte-identical for a given seed across compilers
// and platforms, so the generator is hand-rolled: a splitmix64 stream plus
// Box-Muller normals. std::normal_distribution and friends are
// implementation-defined and would break reproducibility.
#ifndef TEQ_RNG_HPP
#define TEQ_RNG_HPP

#include <cmath>
#include <cstdint>

#include "teq/common.hpp"

namespace teq {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix64(seed)) {}

  // Independent stream per (master seed, sweep point, frame) triple, so frame
  // results do not depend on scheduling or thread count.
  static Rng for_frame(std::uint64_t master, std::uint64_t point, std::uint64_t frame) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ (0xa0761d6478bd642full + point));
    s = mix64(s ^ (0xe7037ed1a0b428dbull + frame));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; never returns 0 so it is safe under log().
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_gauss() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  // Circularly symmetric complex normal with total variance `var`
  // (var/2 per real dimension).
  cplx next_cgauss(double var) {
    const double s = std::sqrt(0.5 * var);
    const double re = next_gauss();
    const double im = next_gauss();
    return cplx(s * re, s * im);
  }

  std::uint8_t next_bit() { return static_cast<std::uint8_t>(next_u64() >> 63); }

  // Unbiased integer in [0, n) by rejection.
  std::uint32_t next_below(std::uint32_t n) {
    const std::uint64_t span = 1ull << 32;
    const std::uint64_t lim = span - span % n;
    std::uint64_t x;
    do {
      x = next_u64() >> 32;
    } while (x >= lim);
    return static_cast<std::uint32_t>(x % n);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace teq

#endif
