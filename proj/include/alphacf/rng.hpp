#pragma once

#include <cstdint>
#include <random>

namespace alphacf {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent random stream for one Monte-Carlo sample. Sample i of a run
// with seed s draws from mt19937_64 seeded with splitmix64(s ^ splitmix64(i)),
// so results never depend on which thread ran the sample or in which order.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index) : engine_(splitmix64(seed ^ splitmix64(index))) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace alphacf
