#pragma once

// Brute-force reference answers. Nothing here calls into the library so the
// solvers are checked against independent code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

struct WEdge {
  int u;
  int v;
  double w;
};

inline bool Close(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Best sum_i w[i][p(i)] over all permutations p.
inline double BestAssignment(const std::vector<std::vector<double>>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  double best = -1e300;
  do {
    double s = 0;
    for (int i = 0; i < n; ++i) s += w[i][p[i]];
    best = std::max(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return n == 0 ? 0.0 : best;
}

// Every matching (not necessarily perfect) as a list of edge indices.
inline std::vector<std::vector<int>> AllMatchings(int nodes, const std::vector<WEdge>& edges) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<char> used(nodes, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    out.push_back(cur);
    for (std::size_t k = from; k < edges.size(); ++k) {
      const auto& e = edges[k];
      if (used[e.u] || used[e.v]) continue;
      used[e.u] = used[e.v] = 1;
      cur.push_back(static_cast<int>(k));
      rec(k + 1);
      cur.pop_back();
      used[e.u] = used[e.v] = 0;
    }
  };
  rec(0);
  return out;
}

inline double BestMatching(int nodes, const std::vector<WEdge>& edges) {
  double best = 0;
  for (const auto& m : AllMatchings(nodes, edges)) {
    double s = 0;
    for (int k : m) s += edges[k].w;
    best = std::max(best, s);
  }
  return best;
}

// Best edge subset with deg(v) <= caps[v]; plain subset enumeration.
inline double BestDegreeCapped(int nodes, const std::vector<WEdge>& edges,
                               const std::vector<int>& caps) {
  const std::size_t e = edges.size();
  double best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << e); ++mask) {
    std::vector<int> deg(nodes, 0);
    double s = 0;
    bool ok = true;
    for (std::size_t k = 0; k < e && ok; ++k) {
      if (!(mask >> k & 1)) continue;
      ok = ++deg[edges[k].u] <= caps[edges[k].u] && ++deg[edges[k].v] <= caps[edges[k].v];
      s += edges[k].w;
    }
    if (ok) best = std::max(best, s);
  }
  return best;
}

// Edge weights v_u(v) + v_v(u) of the complete graph on `nodes`, or of the
// complete bipartite graph between `side` 1 and 2 when side is given.
inline std::vector<WEdge> PairWeights(const std::vector<std::vector<double>>& v,
                                      const std::vector<int>* side = nullptr) {
  std::vector<WEdge> out;
  const int n = static_cast<int>(v.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (side && (*side)[a] == (*side)[b]) continue;
      out.push_back({a, b, v[a][b] + v[b][a]});
    }
  }
  return out;
}

// Largest number of left vertices covered by a subgraph of `allowed` edges
// with every degree <= k: a left vertex is covered by one of its edges, so
// this is the largest left set that can be matched into right vertices of
// capacity k.
inline int MaxCoveredLeft(const std::vector<std::vector<char>>& allowed, int k) {
  const int l = static_cast<int>(allowed.size());
  const int r = l ? static_cast<int>(allowed[0].size()) : 0;
  int best = 0;
  std::vector<int> load(r, 0);
  std::function<void(int, int)> rec = [&](int i, int covered) {
    if (covered + (l - i) <= best) return;
    if (i == l) {
      best = std::max(best, covered);
      return;
    }
    for (int j = 0; j < r; ++j) {
      if (!allowed[i][j] || load[j] >= k) continue;
      ++load[j];
      rec(i + 1, covered + 1);
      --load[j];
    }
    rec(i + 1, covered);
  };
  rec(0, 0);
  return best;
}

}  // namespace oracle
