#pragma once

#include <vector>

#include "twoq/core.h"

namespace twoq {

// Per-agent strict rankings, most preferred first. Each agent ranks only
// its relevant alternatives.
class OrdinalProfile {
 public:
  OrdinalProfile() = default;
  // Rankings may cover any subset of [0, alternative_count); entries must
  // be distinct and in range.
  OrdinalProfile(std::vector<std::vector<int>> rankings, int alternative_count);

  int agent_count() const { return static_cast<int>(rankings_.size()); }
  int alternative_count() const { return alternative_count_; }
  const std::vector<int>& ranking(int agent) const { return rankings_[agent]; }
  const std::vector<std::vector<int>>& rankings() const { return rankings_; }
  // -1 when the agent has an empty ranking.
  int top(int agent) const {
    return rankings_[agent].empty() ? -1 : rankings_[agent].front();
  }
  bool ranks(int agent, int alternative) const;
  // 0 = most preferred. Throws InvalidAlternativeError if unranked.
  int position(int agent, int alternative) const;

  // Most preferred ranked alternative with in_set[alt] != 0, or -1.
  int FavoriteIn(int agent, const std::vector<char>& in_set) const;

  // True iff every ranking is exactly graph.relevant(agent) in some order.
  bool MatchesGraph(const GraphModel& graph) const;

  bool operator==(const OrdinalProfile& o) const {
    return rankings_ == o.rankings_ && alternative_count_ == o.alternative_count_;
  }

 private:
  std::vector<std::vector<int>> rankings_;
  int alternative_count_ = 0;
  std::vector<int> position_;  // agent-major, -1 = unranked
};

enum class Strictness { kStrict, kWeak };

// Sorts each agent's relevant set by decreasing value, ties toward the
// smaller index.
OrdinalProfile DeriveOrdinal(const GraphModel& graph,
                             const ValuationProfile& values);
OrdinalProfile DeriveOrdinal(const Instance& inst);

bool Prefers(const OrdinalProfile& ord, int agent, int a, int b,
             Strictness strictness, const ValuationProfile* values = nullptr);

// Weak consistency: every adjacent ranked pair (a, b) has v[a] >= v[b].
// Throws DimensionMismatchError when shapes differ.
bool CheckConsistency(const OrdinalProfile& ord, const ValuationProfile& values);

}  // namespace twoq
