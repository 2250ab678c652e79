#include "twoq/ordinal.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "twoq/errors.h"

namespace twoq {

OrdinalProfile::OrdinalProfile(std::vector<std::vector<int>> rankings,
                               int alternative_count)
    : rankings_(std::move(rankings)), alternative_count_(alternative_count) {
  if (alternative_count < 0) throw ParameterError("negative alternative count");
  position_.assign(rankings_.size() * static_cast<std::size_t>(alternative_count),
                   -1);
  for (std::size_t i = 0; i < rankings_.size(); ++i) {
    const auto& r = rankings_[i];
    for (std::size_t p = 0; p < r.size(); ++p) {
      const int a = r[p];
      if (a < 0 || a >= alternative_count) {
        throw ParameterError(
            fmt::format("agent {} ranks unknown alternative {}", i, a));
      }
      int& slot = position_[i * alternative_count + a];
      if (slot != -1) {
        throw ParameterError(
            fmt::format("agent {} ranks alternative {} twice", i, a));
      }
      slot = static_cast<int>(p);
    }
  }
}

bool OrdinalProfile::ranks(int agent, int alternative) const {
  if (agent < 0 || agent >= agent_count() || alternative < 0 ||
      alternative >= alternative_count_) {
    return false;
  }
  return position_[static_cast<std::size_t>(agent) * alternative_count_ +
                   alternative] != -1;
}

int OrdinalProfile::position(int agent, int alternative) const {
  if (!ranks(agent, alternative)) {
    throw InvalidAlternativeError(fmt::format(
        "alternative {} is not ranked by agent {}", alternative, agent));
  }
  return position_[static_cast<std::size_t>(agent) * alternative_count_ +
                   alternative];
}

int OrdinalProfile::FavoriteIn(int agent, const std::vector<char>& in_set) const {
  for (int a : rankings_[agent]) {
    if (in_set[a]) return a;
  }
  return -1;
}

bool OrdinalProfile::MatchesGraph(const GraphModel& graph) const {
  if (agent_count() != graph.agent_count() ||
      alternative_count_ != graph.alternative_count()) {
    return false;
  }
  for (int i = 0; i < agent_count(); ++i) {
    std::vector<int> sorted = rankings_[i];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != graph.relevant(i)) return false;
  }
  return true;
}

OrdinalProfile DeriveOrdinal(const GraphModel& graph,
                             const ValuationProfile& values) {
  if (values.rows() != graph.agent_count() ||
      values.cols() != graph.alternative_count()) {
    throw DimensionMismatchError("value matrix does not match the graph");
  }
  std::vector<std::vector<int>> rankings(graph.agent_count());
  for (int i = 0; i < graph.agent_count(); ++i) {
    auto& r = rankings[i];
    r = graph.relevant(i);  // ascending, so stable_sort keeps index order on ties
    std::stable_sort(r.begin(), r.end(),
                     [&](int a, int b) { return values(i, a) > values(i, b); });
  }
  return OrdinalProfile(std::move(rankings), graph.alternative_count());
}

OrdinalProfile DeriveOrdinal(const Instance& inst) {
  return DeriveOrdinal(inst.graph(), inst.node_values());
}

bool Prefers(const OrdinalProfile& ord, int agent, int a, int b,
             Strictness strictness, const ValuationProfile* values) {
  const int pa = ord.position(agent, a);
  const int pb = ord.position(agent, b);
  if (values) {
    const double va = (*values)(agent, a);
    const double vb = (*values)(agent, b);
    return strictness == Strictness::kStrict ? va > vb : va >= vb;
  }
  return pa < pb || (strictness == Strictness::kWeak && pa == pb);
}

bool CheckConsistency(const OrdinalProfile& ord, const ValuationProfile& values) {
  if (ord.agent_count() != values.rows() ||
      ord.alternative_count() != values.cols()) {
    throw DimensionMismatchError(fmt::format(
        "ordinal profile is {}x{} but values are {}x{}", ord.agent_count(),
        ord.alternative_count(), values.rows(), values.cols()));
  }
  for (int i = 0; i < ord.agent_count(); ++i) {
    const auto& r = ord.ranking(i);
    for (std::size_t p = 1; p < r.size(); ++p) {
      if (values(i, r[p - 1]) < values(i, r[p])) return false;
    }
  }
  return true;
}

}  // namespace twoq
