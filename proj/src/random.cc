#include "twoq/random.h"

#include <numeric>

#include "twoq/errors.h"

namespace twoq {

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::UniformIndex(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("UniformIndex bound must be positive");
  // Reject the top partial bucket.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::int64_t Rng::UniformInt(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ParameterError("UniformInt range is empty");
  return lo + static_cast<std::int64_t>(
                  UniformIndex(static_cast<std::uint64_t>(hi - lo) + 1));
}

bool Rng::Bernoulli(double p) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return u < p;
}

std::vector<int> Rng::Permutation(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  Shuffle(p);
  return p;
}

}  // namespace twoq
