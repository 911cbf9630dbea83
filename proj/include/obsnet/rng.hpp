#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace obsnet {

// splitmix64 step; used to derive independent substreams from (seed, index)
// without correlated low bits.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 gives a standard-mandated bit-exact stream; the float transforms
// are done by hand because the std distributions are implementation-defined
// and would break seed reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  int uniform_int(int lo, int hi) {  // inclusive bounds, small ranges only
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

  double normal() {  // Box-Muller, cosine branch only
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace obsnet
