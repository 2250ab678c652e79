#include "twoq/generators.h"

#include "twoq/errors.h"

namespace twoq {

double RandomValue(Rng& rng) { return static_cast<double>(rng.UniformInt(0, 1000000)) / 1000.0; }

SideSplit DefaultSplit(int n) {
  SideSplit s;
  const int n1 = n - n / 2;
  for (int v = 0; v < n; ++v) (v < n1 ? s.n1 : s.n2).push_back(v);
  return s;
}

Instance RandomInstance(const GeneratorSpec& spec, Rng& rng) {
  if (spec.n < 1) throw ParameterError("n must be >= 1");
  const bool sc = spec.kind == ProblemKind::kSocialChoice;
  const int cols = sc ? spec.m : spec.n;
  if (cols < 1) throw ParameterError("m must be >= 1");
  std::optional<SideSplit> split;
  if (KindHasSideSplit(spec.kind)) {
    if (spec.n < 2) throw ParameterError("split kinds need n >= 2");
    split = DefaultSplit(spec.n);
  }
  const GraphModel graph(spec.kind, spec.k, spec.n, cols, split);
  ValuationProfile values(spec.n, cols);
  for (int i = 0; i < spec.n; ++i) {
    if (!graph.is_valued(i)) continue;
    for (int j : graph.relevant(i)) {
      // One-sided items are nodes n..2n-1 in the graph, columns 0..n-1 here.
      const int col = spec.kind == ProblemKind::kOneSidedMatching ? j - spec.n : j;
      values.set(i, col, RandomValue(rng));
    }
  }
  return Instance::Make(spec.kind, spec.k, std::move(values), std::move(split));
}

OrdinalProfile RandomOrdinal(int agents, int alternatives, Rng& rng) {
  std::vector<std::vector<int>> rankings(agents);
  for (auto& r : rankings) r = rng.Permutation(alternatives);
  return OrdinalProfile(std::move(rankings), alternatives);
}

}  // namespace twoq
