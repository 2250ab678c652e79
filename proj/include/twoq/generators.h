#pragma once

#include <optional>

#include "twoq/core.h"
#include "twoq/ordinal.h"
#include "twoq/random.h"

namespace twoq {

// Parameters of a random instance. m is used by social choice only.
struct GeneratorSpec {
  ProblemKind kind = ProblemKind::kOneSidedMatching;
  int n = 4;
  int m = 4;
  int k = 1;
};

// u / 1000 with u uniform in [0, 10^6]; at most 7 significant digits.
double RandomValue(Rng& rng);

// First ceil(n/2) nodes form N1, the rest N2.
SideSplit DefaultSplit(int n);

// Uniform random values on every relevant pair of every valued row.
Instance RandomInstance(const GeneratorSpec& spec, Rng& rng);

// Independent uniform full rankings.
OrdinalProfile RandomOrdinal(int agents, int alternatives, Rng& rng);

}  // namespace twoq
