#pragma once

#include <cmath>
#include <cstdint>

#include "rfscape/vec.hpp"

namespace rfscape {

// splitmix64; platform-independent so seeded runs are reproducible everywhere.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t hash_mix(uint64_t a, uint64_t b) {
  uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed) {
    // burn a few outputs so nearby seeds decorrelate
    splitmix64(state_);
    splitmix64(state_);
  }

  static Rng stream(uint64_t seed, uint64_t stream_id) {
    return Rng(hash_mix(seed, stream_id));
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do { u1 = uniform(); } while (u1 <= 1e-300);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  uint32_t uniform_index(uint32_t n) {
    return uint32_t(next_u64() % uint64_t(n));
  }

  Vec3 unit_vector() {
    double z = uniform(-1.0, 1.0);
    double phi = uniform(0.0, 2.0 * kPi);
    double r = std::sqrt(std::fmax(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  Vec3 in_ball(const Vec3& center, double radius) {
    for (;;) {
      Vec3 p{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      if (norm2(p) <= 1.0) return center + p * radius;
    }
  }

  Vec3 in_box(const Vec3& lo, const Vec3& hi) {
    return {uniform(lo.x, hi.x), uniform(lo.y, hi.y), uniform(lo.z, hi.z)};
  }

 private:
  uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rfscape
