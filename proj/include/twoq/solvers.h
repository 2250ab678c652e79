#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "twoq/core.h"
#include "twoq/ordinal.h"

namespace twoq {

enum class SolverMethod { kHungarian, kBlossom, kFlow, kBrute, kPackingBrute };

std::string_view MethodName(SolverMethod method);

struct SolverResult {
  Subgraph solution;
  double objective = 0.0;
  SolverMethod method = SolverMethod::kBrute;
};

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

// Relative tolerance used for optimality comparisons and tie detection.
inline constexpr double kWeightTolerance = 1e-9;

// Optimal assignment of rows to columns; among optimal assignments the
// lexicographically smallest (row 0's column first, then row 1's, ...).
// Throws DimensionMismatchError on non-square input.
std::vector<int> HungarianAssignment(const Matrix& weights);

// Row i is node i, column j is node n + j.
SolverResult MaxWeightPerfectBipartite(const Matrix& weights);

// Raw blossom matching, mate[v] or -1. Not canonicalized.
std::vector<int> BlossomMate(int node_count, const std::vector<WeightedEdge>& edges);

// Maximum-weight matching; ties toward the lexicographically smallest
// sorted edge list when node_count <= kCanonicalNodeLimit.
SolverResult MaxWeightMatchingGeneral(int node_count,
                                      const std::vector<WeightedEdge>& edges);

inline constexpr int kCanonicalNodeLimit = 32;

// Maximum-weight subgraph with deg(v) <= caps[v]. Bipartite edge sets go
// through min-cost flow with arbitrary caps; non-bipartite ones need
// uniform caps and go through a blossom gadget.
SolverResult MaxWeightDegreeConstrained(int node_count,
                                        const std::vector<WeightedEdge>& edges,
                                        const std::vector<int>& caps);

// Rows are nodes 0..r-1 with cap1, columns nodes r..r+c-1 with cap2.
SolverResult MaxWeightDegreeConstrainedBipartite(const Matrix& weights, int cap1,
                                                 int cap2);

inline constexpr int kPackingNodeLimit = 14;

// Exact packing optimum over a complete graph given symmetric edge weights.
// Only kCliquePacking and kCyclePacking are accepted. Throws
// SizeLimitError above kPackingNodeLimit nodes.
SolverResult MaxWeightPacking(const Matrix& edge_weights, ProblemKind family,
                              int k);

// w(u, v) = v_u(v) + v_v(u) for every edge of the graph.
std::vector<WeightedEdge> EdgeWeights(const GraphModel& graph,
                                      const ValuationProfile& node_values);

// Maximum-weight member of the family under node_values.
SolverResult SolveFamily(const FamilySpec& spec, const GraphModel& graph,
                         const ValuationProfile& node_values);

// Keeps, for each N1 node, its best incident edge by its ranking, then for
// each N2 node its best remaining edge. Every edge of H must join N1 to N2.
Subgraph PruneToMatching(const Subgraph& h, const OrdinalProfile& ord,
                         const std::vector<int>& n1, const std::vector<int>& n2);

// Throws DegreeViolationError if some node has degree > 2.
std::array<Subgraph, 3> DecomposeDegree2(const Subgraph& h);

// The `size` heaviest edges of a matching, ties toward smaller edges.
Subgraph HeaviestSubmatching(const Subgraph& m, const ValuationProfile& node_values,
                             int size);

// Throws ExtensionError when |m| > floor(N / (3 k_eff)) or m is not a
// matching of the graph.
Subgraph ExtendMatchingToFamily(const Subgraph& m, const FamilySpec& spec,
                                const GraphModel& graph);

// Enumerates every matching of the graph of size <= floor(N / (3 k_eff))
// (N <= 10), extends each, and checks feasibility and degree <= k_eff.
bool VerifyFamily(const FamilySpec& spec, const GraphModel& graph);

inline constexpr int kVerifyFamilyNodeLimit = 10;

}  // namespace twoq
