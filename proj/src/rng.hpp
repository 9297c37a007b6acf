#ifndef HAWKES_RNG_HPP
#define HAWKES_RNG_HPP

#include <cmath>
#include <cstdint>

#include "errors.hpp"

namespace hawkes {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoshiro256** stream addressed by a (seed, tag, indices) key. Substreams
// with distinct keys are decorrelated by the splitmix64 seeding chain, so
// cluster simulation can hand one stream to each unit of work and stay
// deterministic under any parallel schedule. All draws are hand-rolled to
// keep streams identical across standard libraries.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t tag, uint64_t a = 0, uint64_t b = 0, uint64_t c = 0) {
    // full avalanche between key injections, so related keys cannot
    // collide into the same state
    uint64_t st = seed;
    st = splitmix64(st) ^ (0x632BE59BD9B4E019ull * (tag + 1));
    st = splitmix64(st) ^ a;
    st = splitmix64(st) ^ b;
    st = splitmix64(st) ^ c;
    for (auto& word : s_) word = splitmix64(st);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on the open interval (0, 1)
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  long poisson(double mean) {
    require(mean >= 0.0 && mean < 5000.0, ErrorCode::invalid_argument,
            "poisson mean out of supported range");
    if (mean == 0.0) return 0;
    const long double threshold = std::exp(static_cast<long double>(-mean));
    long k = 0;
    long double p = 1.0L;
    for (;;) {
      p *= uniform();
      if (p <= threshold) return k;
      ++k;
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace hawkes

#endif
