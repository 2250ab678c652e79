#include <algorithm>
#include <functional>
#include <numeric>

#include <fmt/format.h>

#include "twoq/errors.h"
#include "twoq/solvers.h"

namespace twoq {

Subgraph PruneToMatching(const Subgraph& h, const OrdinalProfile& ord,
                         const std::vector<int>& n1, const std::vector<int>& n2) {
  const int bound = std::max(h.node_bound(), ord.agent_count());
  std::vector<int> side(bound, 0);
  for (int v : n1) {
    if (v < 0 || v >= bound) throw ParameterError("N1 node out of range");
    side[v] = 1;
  }
  for (int v : n2) {
    if (v < 0 || v >= bound) throw ParameterError("N2 node out of range");
    if (side[v] == 1) throw ParameterError(fmt::format("node {} is in both sides", v));
    side[v] = 2;
  }
  // Oriented (N1 endpoint, N2 endpoint).
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : h.edges()) {
    if (side[e.u] == 1 && side[e.v] == 2) {
      edges.emplace_back(e.u, e.v);
    } else if (side[e.u] == 2 && side[e.v] == 1) {
      edges.emplace_back(e.v, e.u);
    } else {
      throw ParameterError(
          fmt::format("edge ({}, {}) does not join N1 to N2", e.u, e.v));
    }
  }
  std::vector<int> best1(bound, -1);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [a, b] = edges[k];
    if (best1[a] == -1 || ord.position(a, b) < ord.position(a, edges[best1[a]].second)) {
      best1[a] = static_cast<int>(k);
    }
  }
  std::vector<int> best2(bound, -1);
  for (int a = 0; a < bound; ++a) {
    if (best1[a] == -1) continue;
    const int k = best1[a];
    const int b = edges[k].second;
    if (best2[b] == -1 || ord.position(b, a) < ord.position(b, edges[best2[b]].first)) {
      best2[b] = k;
    }
  }
  std::vector<Edge> out;
  for (int b = 0; b < bound; ++b) {
    if (best2[b] != -1) out.push_back({edges[best2[b]].first, b});
  }
  return Subgraph(std::move(out));
}

std::array<Subgraph, 3> DecomposeDegree2(const Subgraph& h) {
  const int n = h.node_bound();
  const auto adj = h.Adjacency(n);
  for (int v = 0; v < n; ++v) {
    if (adj[v].size() > 2) {
      throw DegreeViolationError(
          fmt::format("node {} has degree {} > 2", v, adj[v].size()));
    }
  }
  std::array<std::vector<Edge>, 3> parts;
  std::vector<char> done(n, 0);
  auto walk = [&](int start) {
    std::vector<Edge> seq;
    int prev = -1;
    int cur = start;
    done[start] = 1;
    while (true) {
      int next = -1;
      for (int x : adj[cur]) {
        if (x == prev) continue;
        if (x == start && prev != -1 && adj[cur].size() == 2) {
          next = start;
          break;
        }
        if (!done[x]) {
          next = x;
          break;
        }
      }
      if (next == -1) break;
      seq.push_back({std::min(cur, next), std::max(cur, next)});
      if (next == start) break;
      done[next] = 1;
      prev = cur;
      cur = next;
    }
    return seq;
  };
  // Components in order of their smallest node.
  std::vector<int> comp(n, -1);
  for (int v = 0; v < n; ++v) {
    if (comp[v] != -1 || adj[v].empty()) continue;
    std::vector<int> stack{v};
    std::vector<int> members;
    comp[v] = v;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      members.push_back(x);
      for (int y : adj[x]) {
        if (comp[y] == -1) {
          comp[y] = v;
          stack.push_back(y);
        }
      }
    }
    // Paths start at their smaller endpoint, cycles at the smallest node
    // heading to its smaller neighbour.
    int start = -1;
    for (int x : members) {
      if (adj[x].size() == 1 && (start == -1 || x < start)) start = x;
    }
    if (start == -1) start = v;
    const auto seq = walk(start);
    std::size_t from = 0;
    if (seq.size() % 2 == 1) {
      parts[0].push_back(seq[0]);
      from = 1;
    }
    for (std::size_t t = from; t < seq.size(); ++t) {
      parts[1 + (t - from) % 2].push_back(seq[t]);
    }
  }
  return {Subgraph(std::move(parts[0])), Subgraph(std::move(parts[1])),
          Subgraph(std::move(parts[2]))};
}

Subgraph HeaviestSubmatching(const Subgraph& m, const ValuationProfile& node_values,
                             int size) {
  std::vector<std::pair<double, Edge>> scored;
  for (const auto& e : m.edges()) {
    scored.push_back({node_values(e.u, e.v) + node_values(e.v, e.u), e});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Edge> out;
  for (int t = 0; t < size && t < static_cast<int>(scored.size()); ++t) {
    out.push_back(scored[t].second);
  }
  return Subgraph(std::move(out));
}

Subgraph ExtendMatchingToFamily(const Subgraph& m, const FamilySpec& spec,
                                const GraphModel& graph) {
  const int nodes = graph.node_count();
  if (m.node_bound() > nodes) {
    throw MalformedSubgraphError("matching references nodes outside the instance");
  }
  const auto deg = m.Degrees(nodes);
  for (const auto& e : m.edges()) {
    if (!graph.is_edge(e.u, e.v)) {
      throw ExtensionError(fmt::format("({}, {}) is not an edge of the graph", e.u, e.v));
    }
  }
  if (std::any_of(deg.begin(), deg.end(), [](int d) { return d > 1; })) {
    throw ExtensionError("input is not a matching");
  }
  const int limit = nodes / (3 * spec.k_eff);
  if (static_cast<int>(m.size()) > limit) {
    throw ExtensionError(fmt::format("matching of size {} exceeds the extension bound {}",
                                     m.size(), limit));
  }
  std::vector<Edge> out(m.edges().begin(), m.edges().end());
  std::vector<char> used(nodes, 0);
  for (const auto& e : m.edges()) used[e.u] = used[e.v] = 1;
  auto take_free = [&]() {
    for (int v = 0; v < nodes; ++v) {
      if (!used[v]) {
        used[v] = 1;
        return v;
      }
    }
    throw ExtensionError("ran out of free nodes");
  };
  auto add_clique = [&](const std::vector<int>& group) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        out.push_back({std::min(group[a], group[b]), std::max(group[a], group[b])});
      }
    }
  };
  switch (spec.kind) {
    case ProblemKind::kGeneralMatching:
    case ProblemKind::kTwoSidedMatching:
    case ProblemKind::kKMatching:
    case ProblemKind::kKConstrainedAllocation:
      break;
    case ProblemKind::kOneSidedMatching: {
      const int n = nodes / 2;
      int item = n;
      for (int agent = 0; agent < n; ++agent) {
        if (used[agent]) continue;
        while (used[item]) ++item;
        used[agent] = used[item] = 1;
        out.push_back({agent, item});
      }
      break;
    }
    case ProblemKind::kCliquePacking: {
      out.clear();
      for (const auto& e : m.edges()) {
        std::vector<int> group{e.u, e.v};
        for (int t = 0; t < spec.k - 2; ++t) group.push_back(take_free());
        add_clique(group);
      }
      while (std::find(used.begin(), used.end(), 0) != used.end()) {
        std::vector<int> group;
        for (int t = 0; t < spec.k; ++t) group.push_back(take_free());
        add_clique(group);
      }
      break;
    }
    case ProblemKind::kCyclePacking: {
      out.clear();
      for (const auto& e : m.edges()) add_clique({e.u, e.v, take_free()});
      break;
    }
    case ProblemKind::kSocialChoice:
      throw ParameterError("social-choice has no solution family");
  }
  return Subgraph(std::move(out));
}

bool VerifyFamily(const FamilySpec& spec, const GraphModel& graph) {
  const int nodes = graph.node_count();
  if (nodes > kVerifyFamilyNodeLimit) {
    throw SizeLimitError(fmt::format("family verification is limited to {} nodes",
                                     kVerifyFamilyNodeLimit));
  }
  const int limit = nodes / (3 * std::max(1, spec.k_eff));
  const auto edges = graph.edges();
  std::vector<char> used(nodes, 0);
  std::vector<Edge> current;
  bool ok = true;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!ok) return;
    const Subgraph m(current);
    try {
      const Subgraph h = ExtendMatchingToFamily(m, spec, graph);
      for (const auto& e : m.edges()) ok = ok && h.contains(e);
      ok = ok && CheckFeasible(h, spec, graph);
      const auto deg = h.Degrees(nodes);
      ok = ok && std::all_of(deg.begin(), deg.end(),
                             [&](int d) { return d <= spec.k_eff; });
    } catch (const ExtensionError&) {
      ok = false;
    }
    if (!ok || static_cast<int>(current.size()) == limit) return;
    for (std::size_t t = from; t < edges.size(); ++t) {
      const auto [u, v] = edges[t];
      if (used[u] || used[v]) continue;
      used[u] = used[v] = 1;
      current.push_back({u, v});
      rec(t + 1);
      current.pop_back();
      used[u] = used[v] = 0;
    }
  };
  rec(0);
  return ok;
}

}  // namespace twoq
