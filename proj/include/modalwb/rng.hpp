#pragma once

#include <cstdint>

namespace modalwb {

// splitmix64 (Vigna). Fixed generator so campaign reports are
// reproducible across platforms and standard library versions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  bool coin() { return next() & 1; }

  // Independent stream for sample #index of a seeded campaign.
  static Rng for_sample(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
    mix.next();
    return mix;
  }

private:
  std::uint64_t state_;
};

} // namespace modalwb
