#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twoq/core.h"
#include "twoq/ordinal.h"

namespace twoq {

// Layered social-choice instance: alternatives in A_1 are ranked first by
// blocks of agents, blocks sharing a position-l alternative share a
// position-(l+1) alternative, and only positions 1..lambda+1 carry value.
struct LowerBoundLayout {
  int lambda = 0;
  int m = 0;
  std::vector<int> layer_sizes;            // |A_1| .. |A_{lambda+2}|
  std::vector<std::vector<int>> layers;    // members of A_1 .. A_{lambda+2}
  std::vector<int> layer_of;               // 1-based layer per alternative
  // blocks[l-1][j]: agents ranking alternative j at position l, for
  // l = 1..lambda+1; empty when j is not in A_l.
  std::vector<std::vector<std::vector<int>>> blocks;
  std::vector<double> position_values;     // m^{-l/lambda}, l = 1..lambda+1
};

struct LowerBoundInstance {
  Instance instance;
  OrdinalProfile ordinal;
  LowerBoundLayout layout;
};

// Layer sizes ceil(m^{(lambda-l+1)/lambda} / 2) for l <= lambda, two for
// A_{lambda+1}, and the residue for A_{lambda+2}. Throws ParameterError
// when m <= 2^lambda or the residue is negative.
std::vector<int> LowerBoundLayerSizes(int m, int lambda);

LowerBoundInstance GenLowerBound(int m, int lambda, std::uint64_t seed);

// Every ordering of m alternatives held by exactly k agents; agent
// perm_index * k + copy holds the perm_index-th ordering in lexicographic
// order, with value m - p at position p. Requires 3 <= m <= 5 and k*k > m.
Instance GenSrsImpossible(int m, int k);

// Maximizes sum_p coef[p] * z[p] over z[0] >= z[1] >= ... >= 0 with the
// pinned entries fixed. pins[0] must be set; throws UnboundedError
// otherwise and ParameterError if pins increase along the chain.
struct ChainSolution {
  double value = 0.0;
  std::vector<double> z;
};
ChainSolution ChainSolve(const std::vector<double>& coef,
                         const std::vector<std::optional<double>>& pins);

struct CompletionResult {
  ValuationProfile values;
  bool infinite = false;
  double ratio = 1.0;  // SW(X) / SW(Y) on `values`; +inf when infinite
  // The rival attaining the ratio: an alternative for social choice,
  // a solution for graph kinds.
  int rival_alternative = -1;
  std::optional<Subgraph> rival_solution;
  int iterations = 0;
};

inline constexpr double kCompletionTolerance = 1e-6;
inline constexpr int kBisectionLimit = 200;

// Worst consistent completion against winner `y`. An empty rival list
// means every alternative.
CompletionResult AdversarialCompletionSc(const OrdinalProfile& ord,
                                         const QueryTranscript& transcript, int y,
                                         std::vector<int> rivals = {},
                                         double tolerance = kCompletionTolerance);

// Worst consistent completion against solution `y` of a graph kind.
// Without explicit rivals every feasible solution competes: exactly for
// degree-one families, by enumeration up to kRivalEnumerationLimit nodes
// otherwise.
inline constexpr int kRivalEnumerationLimit = 8;
CompletionResult AdversarialCompletionGraph(const GraphModel& graph, const FamilySpec& spec,
                                            const OrdinalProfile& ord,
                                            const QueryTranscript& transcript,
                                            const Subgraph& y,
                                            const std::vector<Subgraph>* rivals = nullptr,
                                            double tolerance = kCompletionTolerance);

// All feasible solutions of a small graph instance.
std::vector<Subgraph> EnumerateFamily(const FamilySpec& spec, const GraphModel& graph);

}  // namespace twoq
