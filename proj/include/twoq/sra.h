#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "twoq/core.h"
#include "twoq/ordinal.h"

namespace twoq {

struct SRAssignment {
  // Indexed by agent; -1 for agents outside N1 or with nothing to pick.
  std::vector<int> assigned;
  // Copies of each N2 alternative, ceil(sqrt(|N1|)).
  int copies = 0;
  // Alternatives in the order their last copy was taken.
  std::vector<int> exhausted;
  // Pick order actually used.
  std::vector<int> order;
};

// Each agent of N1, in `order` (default: ascending), takes its most
// preferred N2 alternative that still has a copy left. Throws
// InfeasibleCopiesError when |N1| > copies * |N2| or an agent with ranked
// N2 alternatives finds all of them exhausted.
SRAssignment SerialDictatorship(const OrdinalProfile& ord, const std::vector<int>& n1,
                                const std::vector<int>& n2,
                                std::vector<int> order = {});

struct SraVerdict {
  bool ok = false;
  bool copy_condition = false;
  // Maximum number of N1 agents covered by a degree <= k_eff bipartite
  // subgraph of strict-improvement edges.
  int max_improving = 0;
  int bound = 0;
  // (agent, alternative) pairs of the maximizing subgraph.
  std::vector<std::pair<int, int>> witness;
};

// Strict improvement: agent i ranks j above A(i), or, when values are given,
// v_i(j) > v_i(A(i)).
SraVerdict VerifySra(const SRAssignment& a, const OrdinalProfile& ord,
                     const std::vector<int>& n1, const std::vector<int>& n2, int k_eff,
                     const ValuationProfile* values = nullptr);

enum class SrsMode { kExact, kGreedy, kTopChoices };

std::string_view SrsModeName(SrsMode mode);
SrsMode ParseSrsMode(std::string_view name);

inline constexpr int kExactSrsLimit = 16;

struct RepresentativeSet {
  std::vector<int> members;  // ascending
  int bound = 0;             // ceil(sqrt(m))
};

struct SrsVerdict {
  bool ok = false;
  bool size_ok = false;
  // Per alternative: agents strictly preferring it to their favourite in B.
  std::vector<int> counts;
  int worst_alternative = -1;
  int worst_count = 0;
  // Agents whose favourite in B is not their top.
  int violating_agents = 0;
};

SrsVerdict VerifyRepresentativeSet(const std::vector<int>& members,
                                   const OrdinalProfile& ord);

// exact: smallest size, then fewest total violations, then
// lexicographically smallest. greedy: repeatedly adds the alternative
// giving the smallest worst count, then the fewest total violations, then
// the smallest index, until the set verifies.
// top-choices: the distinct top alternatives if they verify.
// Throws SizeLimitError for exact mode with m > kExactSrsLimit.
std::optional<RepresentativeSet> FindRepresentativeSet(const OrdinalProfile& ord,
                                                       SrsMode mode);

}  // namespace twoq
