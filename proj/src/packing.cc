#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "twoq/errors.h"
#include "twoq/solvers.h"

namespace twoq {
namespace {

using EdgeSet = unsigned __int128;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Index of edge (u, v), u < v, in lexicographic edge order of K_n.
class EdgeIndex {
 public:
  explicit EdgeIndex(int n) : n_(n), id_(n * n, -1) {
    int next = 0;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        id_[u * n + v] = id_[v * n + u] = next++;
        pairs_.push_back({u, v});
      }
    }
  }
  int operator()(int u, int v) const { return id_[u * n_ + v]; }
  Edge pair(int id) const { return pairs_[id]; }
  int count() const { return static_cast<int>(pairs_.size()); }

 private:
  int n_;
  std::vector<int> id_;
  std::vector<Edge> pairs_;
};

EdgeSet Bit(int i) { return EdgeSet(1) << i; }

int LowestBit(EdgeSet x) {
  const auto lo = static_cast<unsigned long long>(x);
  if (lo != 0) return __builtin_ctzll(lo);
  return 64 + __builtin_ctzll(static_cast<unsigned long long>(x >> 64));
}

// Lexicographic order of the sorted edge lists encoded by a and b.
bool LexLess(EdgeSet a, EdgeSet b) {
  if (a == b) return false;
  const int x = LowestBit(a ^ b);
  const EdgeSet above = x == 127 ? EdgeSet(0) : ~((Bit(x + 1)) - 1);
  if (a & Bit(x)) return (b & above) != 0;
  return (a & above) == 0;
}

struct Best {
  double value = kNegInf;
  EdgeSet edges = 0;

  // True if (v, e) beats the current entry: higher value, or a tie broken
  // toward the lexicographically smaller edge list.
  bool Offer(double v, EdgeSet e, double tol) {
    if (value == kNegInf || v > value + tol ||
        (std::abs(v - value) <= tol && LexLess(e, edges))) {
      value = v;
      edges = e;
      return true;
    }
    return false;
  }
};

SolverResult ToResult(const Best& best, const EdgeIndex& index, int edge_count) {
  std::vector<Edge> edges;
  for (int id = 0; id < edge_count; ++id) {
    if (best.edges & Bit(id)) edges.push_back(index.pair(id));
  }
  Subgraph sub(std::move(edges));
  sub.set_weight(best.value);
  return {std::move(sub), best.value, SolverMethod::kPackingBrute};
}

SolverResult CliquePacking(const Matrix& w, int k, double tol) {
  const int n = w.rows();
  if (k < 2 || n % k != 0) {
    throw ParameterError(fmt::format("clique packing needs k >= 2 and k | n (n={}, k={})", n, k));
  }
  const EdgeIndex index(n);
  const int full = (1 << n) - 1;
  std::vector<Best> dp(1 << n);
  dp[0] = {0.0, 0};
  // dp[mask] packs exactly the nodes in mask; only masks with popcount
  // divisible by k are reachable.
  for (int mask = 1; mask <= full; ++mask) {
    if (__builtin_popcount(mask) % k != 0) continue;
    const int low = __builtin_ctz(mask);
    const int rest = mask & ~(1 << low);
    // Choose k - 1 partners from rest.
    for (int sub = rest; sub > 0; sub = (sub - 1) & rest) {
      if (__builtin_popcount(sub) != k - 1) continue;
      const Best& tail = dp[rest & ~sub];
      if (tail.value == kNegInf) continue;
      const int group = sub | (1 << low);
      double value = tail.value;
      EdgeSet edges = tail.edges;
      for (int a = 0; a < n; ++a) {
        if (!(group >> a & 1)) continue;
        for (int b = a + 1; b < n; ++b) {
          if (!(group >> b & 1)) continue;
          value += w(a, b);
          edges |= Bit(index(a, b));
        }
      }
      dp[mask].Offer(value, edges, tol);
    }
  }
  return ToResult(dp[full], index, index.count());
}

SolverResult CyclePacking(const Matrix& w, int k, double tol) {
  const int n = w.rows();
  if (k < 3) throw ParameterError("cycle packing needs k >= 3");
  const EdgeIndex index(n);
  const int full = (1 << n) - 1;
  // best_cycle[S]: heaviest simple cycle through exactly the nodes of S.
  std::vector<Best> best_cycle(1 << n);
  for (int s = 0; s + 2 < n; ++s) {
    // Paths from s over nodes > s, indexed by (subset of the m higher
    // nodes, end node offset).
    const int m = n - s - 1;
    const int limit = std::min(k - 1, m);
    std::vector<std::vector<Best>> dp(static_cast<std::size_t>(1) << m,
                                      std::vector<Best>(m));
    for (int e = 0; e < m; ++e) {
      const int v = s + 1 + e;
      dp[1 << e][e] = {w(s, v), Bit(index(s, v))};
    }
    for (int sub = 1; sub < (1 << m); ++sub) {
      const int size = __builtin_popcount(sub);
      if (size > limit) continue;
      for (int e = 0; e < m; ++e) {
        const Best& cur = dp[sub][e];
        if (cur.value == kNegInf) continue;
        const int end = s + 1 + e;
        if (size >= 2) {
          const int set = (sub << (s + 1)) | (1 << s);
          best_cycle[set].Offer(cur.value + w(end, s), cur.edges | Bit(index(end, s)), tol);
        }
        if (size == limit) continue;
        for (int f = 0; f < m; ++f) {
          if (sub >> f & 1) continue;
          const int next = s + 1 + f;
          dp[sub | (1 << f)][f].Offer(cur.value + w(end, next),
                                      cur.edges | Bit(index(end, next)), tol);
        }
      }
    }
  }
  std::vector<Best> dp(1 << n);
  dp[0] = {0.0, 0};
  for (int mask = 1; mask <= full; ++mask) {
    const int low = __builtin_ctz(mask);
    const int rest = mask & ~(1 << low);
    dp[mask] = dp[rest];  // low stays uncovered
    for (int sub = rest; sub > 0; sub = (sub - 1) & rest) {
      const int cyc = sub | (1 << low);
      const Best& c = best_cycle[cyc];
      if (c.value == kNegInf) continue;
      const Best& tail = dp[rest & ~sub];
      dp[mask].Offer(c.value + tail.value, c.edges | tail.edges, tol);
    }
  }
  return ToResult(dp[full], index, index.count());
}

}  // namespace

SolverResult MaxWeightPacking(const Matrix& edge_weights, ProblemKind family, int k) {
  const int n = edge_weights.rows();
  if (edge_weights.cols() != n) {
    throw DimensionMismatchError("packing weights must be square");
  }
  if (n > kPackingNodeLimit) {
    throw SizeLimitError(fmt::format("packing solver is limited to {} nodes, got {}",
                                     kPackingNodeLimit, n));
  }
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) scale += std::abs(edge_weights(i, j));
  }
  const double tol = kWeightTolerance * std::max(1.0, scale);
  switch (family) {
    case ProblemKind::kCliquePacking:
      return CliquePacking(edge_weights, k, tol);
    case ProblemKind::kCyclePacking:
      return CyclePacking(edge_weights, k, tol);
    default:
      throw ParameterError("packing solver handles clique and cycle packing only");
  }
}

}  // namespace twoq
