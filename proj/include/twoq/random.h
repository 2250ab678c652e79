#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace twoq {

// splitmix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// mt19937_64 with hand-written range reduction so streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, bound).
  std::uint64_t UniformIndex(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);
  bool Bernoulli(double p);

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[UniformIndex(i)]);
    }
  }
  std::vector<int> Permutation(int n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace twoq
