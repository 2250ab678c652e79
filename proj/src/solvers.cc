#include "twoq/solvers.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>

#include <fmt/format.h>

#include "twoq/errors.h"

namespace twoq {

std::string_view MethodName(SolverMethod method) {
  switch (method) {
    case SolverMethod::kHungarian:
      return "hungarian";
    case SolverMethod::kBlossom:
      return "blossom";
    case SolverMethod::kFlow:
      return "flow";
    case SolverMethod::kBrute:
      return "brute";
    case SolverMethod::kPackingBrute:
      return "packing-brute";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Tolerance(double scale) {
  return kWeightTolerance * std::max(1.0, std::abs(scale));
}

struct Solved {
  std::vector<Edge> edges;
  double objective = 0.0;
};

// Returns an optimal solution containing every forced edge, or nullopt if
// no feasible solution contains them.
using ForcedSolver = std::function<std::optional<Solved>(const std::vector<WeightedEdge>&)>;

// Walks candidate edges in sorted order and keeps an edge whenever some
// optimal solution contains it together with everything kept so far.
// Stops as soon as the kept edges alone are optimal.
std::vector<Edge> Canonicalize(std::vector<WeightedEdge> candidates,
                               const Solved& witness_in, const ForcedSolver& solve) {
  for (auto& c : candidates) {
    if (c.u > c.v) std::swap(c.u, c.v);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  const double target = witness_in.objective;
  const double tol = Tolerance(target);
  Solved witness = witness_in;
  std::sort(witness.edges.begin(), witness.edges.end());
  std::vector<WeightedEdge> kept;
  double kept_weight = 0.0;
  for (const auto& c : candidates) {
    if (kept_weight >= target - tol) break;
    const Edge e{c.u, c.v};
    if (std::binary_search(witness.edges.begin(), witness.edges.end(), e)) {
      kept.push_back(c);
      kept_weight += c.w;
      continue;
    }
    kept.push_back(c);
    auto trial = solve(kept);
    if (trial && trial->objective >= target - tol) {
      witness = std::move(*trial);
      std::sort(witness.edges.begin(), witness.edges.end());
      kept_weight += c.w;
    } else {
      kept.pop_back();
    }
  }
  std::vector<Edge> out;
  for (const auto& c : kept) out.push_back({c.u, c.v});
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Hungarian

std::vector<int> HungarianAssignment(const Matrix& weights) {
  const int n = weights.rows();
  if (weights.cols() != n) {
    throw DimensionMismatchError(fmt::format(
        "assignment needs a square matrix, got {}x{}", weights.rows(), weights.cols()));
  }
  if (n == 0) return {};
  double maxabs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(weights(i, j))) throw NumericError("non-finite weight");
      maxabs = std::max(maxabs, std::abs(weights(i, j)));
    }
  }
  // Minimize a = -w with 1-based potentials.
  auto a = [&](int i, int j) { return -weights(i - 1, j - 1); };
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of(n), row_of(n);
  for (int j = 1; j <= n; ++j) {
    row_of[j - 1] = p[j] - 1;
    col_of[p[j] - 1] = j - 1;
  }
  // Every optimal assignment lives on the tight edges of the optimal duals,
  // so the lexicographic minimum is found there row by row.
  const double eps = 1e-9 * std::max(1.0, maxabs);
  auto tight = [&](int i, int j) {
    return a(i + 1, j + 1) - u[i + 1] - v[j + 1] <= eps;
  };
  std::vector<char> seen(n);
  // Re-match row r using only rows > fixed; col_of/row_of are updated on
  // success.
  std::function<bool(int, int)> augment = [&](int r, int fixed) -> bool {
    for (int c = 0; c < n; ++c) {
      if (seen[c] || !tight(r, c)) continue;
      seen[c] = 1;
      const int owner = row_of[c];
      if (owner == -1 || (owner > fixed && augment(owner, fixed))) {
        row_of[c] = r;
        col_of[r] = c;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < col_of[i]; ++j) {
      if (!tight(i, j)) continue;
      const int old = col_of[i];
      const int r = row_of[j];
      if (r < i) continue;
      // Give j to i, free i's old column and re-route r.
      auto saved_col = col_of;
      auto saved_row = row_of;
      row_of[old] = -1;
      row_of[j] = i;
      col_of[i] = j;
      std::fill(seen.begin(), seen.end(), 0);
      seen[j] = 1;
      for (int c = 0; c < n; ++c) {
        if (row_of[c] != -1 && row_of[c] <= i) seen[c] = 1;
      }
      if (augment(r, i)) break;
      col_of = std::move(saved_col);
      row_of = std::move(saved_row);
    }
  }
  return col_of;
}

SolverResult MaxWeightPerfectBipartite(const Matrix& weights) {
  const auto col_of = HungarianAssignment(weights);
  const int n = weights.rows();
  std::vector<Edge> edges;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    edges.push_back({i, n + col_of[i]});
    total += weights(i, col_of[i]);
  }
  SolverResult r{Subgraph(std::move(edges)), total, SolverMethod::kHungarian};
  r.solution.set_weight(total);
  return r;
}

// ---------------------------------------------------------------- matching

namespace {

std::optional<Solved> SolveMatchingForced(int node_count,
                                          const std::vector<WeightedEdge>& edges,
                                          const std::vector<WeightedEdge>& forced) {
  std::vector<char> blocked(node_count, 0);
  Solved s;
  for (const auto& f : forced) {
    if (blocked[f.u] || blocked[f.v]) return std::nullopt;
    blocked[f.u] = blocked[f.v] = 1;
    s.edges.push_back({std::min(f.u, f.v), std::max(f.u, f.v)});
    s.objective += f.w;
  }
  std::vector<WeightedEdge> rest;
  for (const auto& e : edges) {
    if (!blocked[e.u] && !blocked[e.v]) rest.push_back(e);
  }
  const auto mate = BlossomMate(node_count, rest);
  // Parallel edges keep the heaviest copy.
  std::vector<double> best(node_count, -kInf);
  for (const auto& e : rest) {
    if (mate[e.u] == e.v) {
      const int a = std::min(e.u, e.v);
      best[a] = std::max(best[a], e.w);
    }
  }
  for (int v = 0; v < node_count; ++v) {
    if (mate[v] > v) {
      s.edges.push_back({v, mate[v]});
      s.objective += best[v];
    }
  }
  return s;
}

}  // namespace

SolverResult MaxWeightMatchingGeneral(int node_count,
                                      const std::vector<WeightedEdge>& edges) {
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count || e.u == e.v) {
      throw MalformedSubgraphError(
          fmt::format("edge ({}, {}) out of range or self-loop", e.u, e.v));
    }
  }
  Solved witness = *SolveMatchingForced(node_count, edges, {});
  std::vector<Edge> chosen = witness.edges;
  if (node_count <= kCanonicalNodeLimit) {
    chosen = Canonicalize(edges, witness, [&](const std::vector<WeightedEdge>& forced) {
      return SolveMatchingForced(node_count, edges, forced);
    });
  }
  Subgraph sub(std::move(chosen));
  // Objective from the chosen edges, heaviest parallel copy.
  double total = 0.0;
  for (const auto& e : sub.edges()) {
    double w = -kInf;
    for (const auto& c : edges) {
      if (std::min(c.u, c.v) == e.u && std::max(c.u, c.v) == e.v) w = std::max(w, c.w);
    }
    total += w;
  }
  sub.set_weight(total);
  return {std::move(sub), total, SolverMethod::kBlossom};
}

// ------------------------------------------------------- degree constrained

namespace {

// Two-colours the endpoints of the edge set; nullopt if an odd cycle exists.
std::optional<std::vector<int>> TwoColor(int node_count,
                                         const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<int>> adj(node_count);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> color(node_count, -1);
  for (int s = 0; s < node_count; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (int y : adj[x]) {
        if (color[y] == -1) {
          color[y] = 1 - color[x];
          q.push(y);
        } else if (color[y] == color[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

// Successive shortest paths on source -> left -> right -> sink; stops when
// the next path no longer gains weight.
std::vector<int> MinCostFlowSelect(int node_count,
                                   const std::vector<WeightedEdge>& edges,
                                   const std::vector<int>& caps,
                                   const std::vector<int>& color) {
  struct Arc {
    int to;
    int cap;
    double cost;
  };
  const int src = node_count;
  const int snk = node_count + 1;
  const int total = node_count + 2;
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out(total);
  auto add = [&](int a, int b, int cap, double cost) {
    out[a].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({b, cap, cost});
    out[b].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({a, 0, -cost});
  };
  std::vector<int> edge_arc(edges.size(), -1);
  double maxw = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    if (e.w <= 0) continue;
    maxw = std::max(maxw, e.w);
    const int l = color[e.u] == 0 ? e.u : e.v;
    const int r = color[e.u] == 0 ? e.v : e.u;
    edge_arc[k] = static_cast<int>(arcs.size());
    add(l, r, 1, -e.w);
  }
  for (int v = 0; v < node_count; ++v) {
    if (caps[v] <= 0) continue;
    if (color[v] == 0) {
      add(src, v, caps[v], 0.0);
    } else {
      add(v, snk, caps[v], 0.0);
    }
  }
  const double eps = 1e-12 * std::max(1.0, maxw);
  std::vector<double> dist(total);
  std::vector<int> prev_arc(total);
  std::vector<char> in_queue(total);
  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev_arc.begin(), prev_arc.end(), -1);
    dist[src] = 0.0;
    std::deque<int> q{src};
    in_queue.assign(total, 0);
    in_queue[src] = 1;
    while (!q.empty()) {
      const int x = q.front();
      q.pop_front();
      in_queue[x] = 0;
      for (int id : out[x]) {
        const Arc& arc = arcs[id];
        if (arc.cap <= 0) continue;
        const double nd = dist[x] + arc.cost;
        if (nd < dist[arc.to] - eps) {
          dist[arc.to] = nd;
          prev_arc[arc.to] = id;
          if (!in_queue[arc.to]) {
            in_queue[arc.to] = 1;
            q.push_back(arc.to);
          }
        }
      }
    }
    if (!(dist[snk] < -eps)) break;
    for (int x = snk; x != src;) {
      const int id = prev_arc[x];
      arcs[id].cap -= 1;
      arcs[id ^ 1].cap += 1;
      x = arcs[id ^ 1].to;
    }
  }
  std::vector<int> chosen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edge_arc[k] >= 0 && arcs[edge_arc[k]].cap == 0) {
      chosen.push_back(static_cast<int>(k));
    }
  }
  return chosen;
}

// Degree-constrained subgraph on a general graph as a matching problem:
// node v gets caps[v] copies and edge e = (u, v) becomes the path
// copies(u) - e_u - e_v - copies(v). The middle edge weighs W, the side
// edges (W + w) / 2 each, so using e is worth exactly w more.
std::vector<int> GadgetSelect(int node_count, const std::vector<WeightedEdge>& edges,
                              const std::vector<int>& caps) {
  std::vector<int> first_copy(node_count + 1, 0);
  for (int v = 0; v < node_count; ++v) first_copy[v + 1] = first_copy[v] + std::max(0, caps[v]);
  const int copies = first_copy[node_count];
  std::vector<int> live;
  double maxw = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges[k].w > 0 && caps[edges[k].u] > 0 && caps[edges[k].v] > 0) {
      live.push_back(static_cast<int>(k));
      maxw = std::max(maxw, edges[k].w);
    }
  }
  const double big = 2.0 * maxw + 2.0;
  const int total = copies + 2 * static_cast<int>(live.size());
  std::vector<WeightedEdge> g;
  for (std::size_t t = 0; t < live.size(); ++t) {
    const auto& e = edges[live[t]];
    const int eu = copies + 2 * static_cast<int>(t);
    const int ev = eu + 1;
    g.push_back({eu, ev, big});
    const double side = (big + e.w) / 2.0;
    for (int c = first_copy[e.u]; c < first_copy[e.u + 1]; ++c) g.push_back({c, eu, side});
    for (int c = first_copy[e.v]; c < first_copy[e.v + 1]; ++c) g.push_back({c, ev, side});
  }
  const auto mate = BlossomMate(total, g);
  std::vector<int> chosen;
  for (std::size_t t = 0; t < live.size(); ++t) {
    const int eu = copies + 2 * static_cast<int>(t);
    if (mate[eu] != -1 && mate[eu] != eu + 1 && mate[eu + 1] != -1 &&
        mate[eu + 1] != eu) {
      chosen.push_back(live[t]);
    }
  }
  return chosen;
}

std::optional<Solved> SolveDegreeForced(int node_count,
                                        const std::vector<WeightedEdge>& edges,
                                        std::vector<int> caps,
                                        const std::optional<std::vector<int>>& color,
                                        const std::vector<WeightedEdge>& forced) {
  Solved s;
  std::vector<std::pair<int, int>> forced_keys;
  for (const auto& f : forced) {
    if (--caps[f.u] < 0 || --caps[f.v] < 0) return std::nullopt;
    s.edges.push_back({std::min(f.u, f.v), std::max(f.u, f.v)});
    s.objective += f.w;
    forced_keys.emplace_back(std::min(f.u, f.v), std::max(f.u, f.v));
  }
  std::sort(forced_keys.begin(), forced_keys.end());
  std::vector<WeightedEdge> rest;
  for (const auto& e : edges) {
    const std::pair<int, int> key{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (!std::binary_search(forced_keys.begin(), forced_keys.end(), key)) {
      rest.push_back(e);
    }
  }
  const auto picked = color ? MinCostFlowSelect(node_count, rest, caps, *color)
                            : GadgetSelect(node_count, rest, caps);
  for (int k : picked) {
    s.edges.push_back({std::min(rest[k].u, rest[k].v), std::max(rest[k].u, rest[k].v)});
    s.objective += rest[k].w;
  }
  return s;
}

}  // namespace

SolverResult MaxWeightDegreeConstrained(int node_count,
                                        const std::vector<WeightedEdge>& edges,
                                        const std::vector<int>& caps) {
  if (static_cast<int>(caps.size()) != node_count) {
    throw DimensionMismatchError("caps must have one entry per node");
  }
  for (int c : caps) {
    if (c < 0) throw ParameterError("degree caps must be nonnegative");
  }
  std::vector<std::pair<int, int>> keys;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count || e.u == e.v) {
      throw MalformedSubgraphError(
          fmt::format("edge ({}, {}) out of range or self-loop", e.u, e.v));
    }
    keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw MalformedSubgraphError("parallel edges are not supported here");
  }
  const auto color = TwoColor(node_count, edges);
  const SolverMethod method = color ? SolverMethod::kFlow : SolverMethod::kBlossom;
  Solved witness = *SolveDegreeForced(node_count, edges, caps, color, {});
  std::vector<Edge> chosen = witness.edges;
  if (node_count <= kCanonicalNodeLimit) {
    chosen = Canonicalize(edges, witness, [&](const std::vector<WeightedEdge>& forced) {
      return SolveDegreeForced(node_count, edges, caps, color, forced);
    });
  }
  Subgraph sub(std::move(chosen));
  double total = 0.0;
  for (const auto& e : sub.edges()) {
    for (const auto& c : edges) {
      if (std::min(c.u, c.v) == e.u && std::max(c.u, c.v) == e.v) total += c.w;
    }
  }
  sub.set_weight(total);
  return {std::move(sub), total, method};
}

SolverResult MaxWeightDegreeConstrainedBipartite(const Matrix& weights, int cap1,
                                                 int cap2) {
  if (cap1 < 1 || cap2 < 1) throw ParameterError("caps must be >= 1");
  const int r = weights.rows();
  const int c = weights.cols();
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) edges.push_back({i, r + j, weights(i, j)});
  }
  std::vector<int> caps(r + c, cap2);
  std::fill(caps.begin(), caps.begin() + r, cap1);
  return MaxWeightDegreeConstrained(r + c, edges, caps);
}

// ------------------------------------------------------------ family solve

std::vector<WeightedEdge> EdgeWeights(const GraphModel& graph,
                                      const ValuationProfile& node_values) {
  std::vector<WeightedEdge> out;
  for (auto [u, v] : graph.edges()) {
    out.push_back({u, v, node_values(u, v) + node_values(v, u)});
  }
  return out;
}

SolverResult SolveFamily(const FamilySpec& spec, const GraphModel& graph,
                         const ValuationProfile& node_values) {
  if (graph.is_social_choice()) {
    throw ParameterError("social-choice instances have no solution family");
  }
  const int nodes = graph.node_count();
  switch (spec.kind) {
    case ProblemKind::kOneSidedMatching: {
      const int n = nodes / 2;
      Matrix w(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          w(i, j) = node_values(i, n + j) + node_values(n + j, i);
        }
      }
      return MaxWeightPerfectBipartite(w);
    }
    case ProblemKind::kGeneralMatching:
    case ProblemKind::kTwoSidedMatching:
      return MaxWeightMatchingGeneral(nodes, EdgeWeights(graph, node_values));
    case ProblemKind::kKMatching:
      return MaxWeightDegreeConstrained(nodes, EdgeWeights(graph, node_values),
                                        std::vector<int>(nodes, spec.k));
    case ProblemKind::kKConstrainedAllocation: {
      std::vector<int> caps(nodes, 0);
      for (int v : graph.side1()) caps[v] = spec.k;
      for (int v : graph.side2()) caps[v] = 1;
      return MaxWeightDegreeConstrained(nodes, EdgeWeights(graph, node_values), caps);
    }
    case ProblemKind::kCliquePacking:
    case ProblemKind::kCyclePacking: {
      Matrix w(nodes, nodes);
      for (auto [u, v] : graph.edges()) {
        w(u, v) = w(v, u) = node_values(u, v) + node_values(v, u);
      }
      return MaxWeightPacking(w, spec.kind, spec.k);
    }
    case ProblemKind::kSocialChoice:
      break;
  }
  throw ParameterError("unsupported family");
}

}  // namespace twoq
