#include "twoq/sra.h"

#include <algorithm>
#include <numeric>
#include <queue>

#include <fmt/format.h>

#include "twoq/errors.h"

namespace twoq {

SRAssignment SerialDictatorship(const OrdinalProfile& ord, const std::vector<int>& n1,
                                const std::vector<int>& n2, std::vector<int> order) {
  SRAssignment out;
  const int agents = ord.agent_count();
  const int alts = ord.alternative_count();
  out.copies = ceil_sqrt(static_cast<int>(n1.size()));
  if (static_cast<long long>(n1.size()) >
      static_cast<long long>(out.copies) * static_cast<long long>(n2.size())) {
    throw InfeasibleCopiesError(fmt::format(
        "{} agents cannot share {} alternatives with {} copies each", n1.size(),
        n2.size(), out.copies));
  }
  std::vector<int> left(alts, 0);
  for (int j : n2) {
    if (j < 0 || j >= alts) throw ParameterError(fmt::format("N2 member {} out of range", j));
    left[j] = out.copies;
  }
  std::vector<char> in_n1(agents, 0);
  for (int i : n1) {
    if (i < 0 || i >= agents) throw ParameterError(fmt::format("N1 member {} out of range", i));
    in_n1[i] = 1;
  }
  if (order.empty()) {
    order = n1;
    std::sort(order.begin(), order.end());
  } else {
    auto a = order;
    auto b = n1;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw ParameterError("pick order must be a permutation of N1");
  }
  std::vector<char> in_n2(alts, 0);
  for (int j : n2) in_n2[j] = 1;
  out.assigned.assign(agents, -1);
  for (int i : order) {
    bool ranks_any = false;
    for (int j : ord.ranking(i)) {
      if (!in_n2[j]) continue;
      ranks_any = true;
      if (left[j] == 0) continue;
      out.assigned[i] = j;
      if (--left[j] == 0) out.exhausted.push_back(j);
      break;
    }
    if (ranks_any && out.assigned[i] == -1) {
      throw InfeasibleCopiesError(
          fmt::format("agent {} found every ranked alternative exhausted", i));
    }
  }
  out.order = std::move(order);
  return out;
}

namespace {

// Max flow source -> agent (1) -> alternative (cap) -> sink, stopping once
// it exceeds `stop`. Returns the flow edges.
std::vector<std::pair<int, int>> CappedFlow(
    int agents, int alts, const std::vector<std::vector<int>>& adj, int cap, int stop) {
  std::vector<int> load(alts, 0);
  std::vector<std::vector<int>> holders(alts);
  std::vector<int> match(agents, -1);
  std::vector<int> prev_agent(alts);
  int flow = 0;
  for (int s = 0; s < agents && flow <= stop; ++s) {
    if (adj[s].empty()) continue;
    // BFS over agents; an alternative with spare capacity ends the path.
    std::fill(prev_agent.begin(), prev_agent.end(), -2);
    std::queue<int> q;
    q.push(s);
    int found = -1;
    while (!q.empty() && found == -1) {
      const int i = q.front();
      q.pop();
      for (int j : adj[i]) {
        if (prev_agent[j] != -2) continue;
        prev_agent[j] = i;
        if (load[j] < cap) {
          found = j;
          break;
        }
        for (int h : holders[j]) q.push(h);
      }
    }
    if (found == -1) continue;
    // Walk back: alternative j gets agent prev_agent[j], whose previous
    // alternative passes to the agent that reached it.
    int j = found;
    ++load[j];
    while (true) {
      const int i = prev_agent[j];
      const int old = match[i];
      match[i] = j;
      holders[j].push_back(i);
      if (old == -1) break;
      auto& h = holders[old];
      h.erase(std::find(h.begin(), h.end(), i));
      j = old;
    }
    ++flow;
  }
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < agents; ++i) {
    if (match[i] != -1) out.emplace_back(i, match[i]);
  }
  return out;
}

}  // namespace

SraVerdict VerifySra(const SRAssignment& a, const OrdinalProfile& ord,
                     const std::vector<int>& n1, const std::vector<int>& n2, int k_eff,
                     const ValuationProfile* values) {
  if (k_eff < 1) throw ParameterError("k_eff must be >= 1");
  const int agents = ord.agent_count();
  const int alts = ord.alternative_count();
  SraVerdict v;
  v.bound = k_eff * a.copies;
  std::vector<char> in_n2(alts, 0);
  for (int j : n2) in_n2[j] = 1;

  v.copy_condition = static_cast<int>(a.assigned.size()) == agents;
  std::vector<int> load(alts, 0);
  for (int i : n1) {
    const int j = v.copy_condition ? a.assigned[i] : -1;
    if (j == -1) continue;
    if (j < 0 || j >= alts || !in_n2[j]) {
      v.copy_condition = false;
      continue;
    }
    if (++load[j] > a.copies) v.copy_condition = false;
  }

  std::vector<std::vector<int>> adj(agents);
  if (static_cast<int>(a.assigned.size()) == agents) {
    for (int i : n1) {
      const int own = a.assigned[i];
      if (own < 0) continue;
      for (int j : ord.ranking(i)) {
        if (!in_n2[j] || j == own) continue;
        const bool better =
            values ? (*values)(i, j) > (*values)(i, own) : ord.position(i, j) < ord.position(i, own);
        if (better) adj[i].push_back(j);
      }
    }
  }
  v.witness = CappedFlow(agents, alts, adj, k_eff, agents);
  v.max_improving = static_cast<int>(v.witness.size());
  v.ok = v.copy_condition && v.max_improving <= v.bound;
  return v;
}

std::string_view SrsModeName(SrsMode mode) {
  switch (mode) {
    case SrsMode::kExact:
      return "exact";
    case SrsMode::kGreedy:
      return "greedy";
    case SrsMode::kTopChoices:
      return "top-choices";
  }
  return "unknown";
}

SrsMode ParseSrsMode(std::string_view name) {
  if (name == "exact") return SrsMode::kExact;
  if (name == "greedy") return SrsMode::kGreedy;
  if (name == "top-choices") return SrsMode::kTopChoices;
  throw ParameterError(fmt::format("unknown SRS mode '{}'", name));
}

SrsVerdict VerifyRepresentativeSet(const std::vector<int>& members,
                                   const OrdinalProfile& ord) {
  const int m = ord.alternative_count();
  const int bound = ceil_sqrt(m);
  SrsVerdict v;
  std::vector<char> in_b(m, 0);
  for (int j : members) {
    if (j < 0 || j >= m) throw InvalidAlternativeError(fmt::format("alternative {} out of range", j));
    in_b[j] = 1;
  }
  const int size = static_cast<int>(std::count(in_b.begin(), in_b.end(), 1));
  v.size_ok = size >= 1 && size <= bound;
  v.counts.assign(m, 0);
  for (int i = 0; i < ord.agent_count(); ++i) {
    const auto& r = ord.ranking(i);
    std::size_t p = 0;
    while (p < r.size() && !in_b[r[p]]) ++p;
    if (p > 0) ++v.violating_agents;
    for (std::size_t t = 0; t < p; ++t) ++v.counts[r[t]];
  }
  for (int j = 0; j < m; ++j) {
    if (in_b[j]) continue;
    if (v.worst_alternative == -1 || v.counts[j] > v.worst_count) {
      v.worst_alternative = j;
      v.worst_count = v.counts[j];
    }
  }
  v.ok = v.size_ok && v.worst_count <= bound;
  return v;
}

std::optional<RepresentativeSet> FindRepresentativeSet(const OrdinalProfile& ord,
                                                       SrsMode mode) {
  const int m = ord.alternative_count();
  const int bound = ceil_sqrt(m);
  if (m < 1) return std::nullopt;
  auto accept = [&](std::vector<int> members) -> std::optional<RepresentativeSet> {
    std::sort(members.begin(), members.end());
    if (!VerifyRepresentativeSet(members, ord).ok) return std::nullopt;
    return RepresentativeSet{std::move(members), bound};
  };
  switch (mode) {
    case SrsMode::kTopChoices: {
      std::vector<int> tops;
      for (int i = 0; i < ord.agent_count(); ++i) {
        if (ord.top(i) != -1) tops.push_back(ord.top(i));
      }
      std::sort(tops.begin(), tops.end());
      tops.erase(std::unique(tops.begin(), tops.end()), tops.end());
      if (tops.empty()) tops.push_back(0);
      if (static_cast<int>(tops.size()) > bound) return std::nullopt;
      return accept(std::move(tops));
    }
    case SrsMode::kGreedy: {
      std::vector<int> b;
      std::vector<char> in_b(m, 0);
      while (static_cast<int>(b.size()) < bound) {
        // Smallest worst count, then fewest total violations, then index.
        int best = -1;
        std::pair<int, long long> best_score{0, 0};
        for (int j = 0; j < m; ++j) {
          if (in_b[j]) continue;
          auto trial = b;
          trial.push_back(j);
          const auto v = VerifyRepresentativeSet(trial, ord);
          const std::pair<int, long long> score{
              v.worst_count, std::accumulate(v.counts.begin(), v.counts.end(), 0LL)};
          if (best == -1 || score < best_score) {
            best = j;
            best_score = score;
          }
        }
        if (best == -1) break;
        b.push_back(best);
        in_b[best] = 1;
        if (auto r = accept(b)) return r;
      }
      return std::nullopt;
    }
    case SrsMode::kExact: {
      if (m > kExactSrsLimit) {
        throw SizeLimitError(fmt::format(
            "exact representative-set search is limited to m <= {}, got {}",
            kExactSrsLimit, m));
      }
      // Smallest size; within it the fewest total violations, then the
      // lexicographically smallest set.
      for (int size = 1; size <= std::min(bound, m); ++size) {
        std::vector<int> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        std::optional<std::vector<int>> best;
        long long best_total = 0;
        while (true) {
          const auto v = VerifyRepresentativeSet(idx, ord);
          if (v.ok) {
            const long long total = std::accumulate(v.counts.begin(), v.counts.end(), 0LL);
            if (!best || total < best_total) {
              best = idx;
              best_total = total;
            }
          }
          int t = size - 1;
          while (t >= 0 && idx[t] == m - size + t) --t;
          if (t < 0) break;
          ++idx[t];
          for (int u = t + 1; u < size; ++u) idx[u] = idx[u - 1] + 1;
        }
        if (best) return accept(std::move(*best));
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace twoq
