#include "twoq/core.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "twoq/errors.h"

namespace twoq {

int ceil_sqrt(int n) {
  if (n <= 0) return 0;
  int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 1 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

Matrix::Matrix(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw ParameterError("negative matrix dimension");
  data_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

ValuationProfile ValuationProfile::FromRows(
    const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int m = n == 0 ? 0 : static_cast<int>(rows[0].size());
  ValuationProfile p(n, m);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != m) {
      throw ParseError(ParseErrorKind::kDimensionMismatch,
                       fmt::format("row {} has length {}, expected {}", i,
                                   rows[i].size(), m));
    }
    for (int j = 0; j < m; ++j) {
      const double v = rows[i][j];
      if (!std::isfinite(v)) {
        throw ParseError(ParseErrorKind::kSchema,
                         fmt::format("value [{}][{}] is not finite", i, j));
      }
      if (v < 0) {
        throw ParseError(ParseErrorKind::kNegativeValue,
                         fmt::format("value [{}][{}] = {} is negative", i, j, v));
      }
      p.matrix_(i, j) = v;
    }
  }
  return p;
}

void ValuationProfile::set(int i, int j, double value) {
  if (!std::isfinite(value) || value < 0) {
    throw ParameterError(fmt::format("invalid value {} at [{}][{}]", value, i, j));
  }
  matrix_(i, j) = value;
}

namespace {

struct KindEntry {
  ProblemKind kind;
  std::string_view name;
};

constexpr KindEntry kKinds[] = {
    {ProblemKind::kOneSidedMatching, "one-sided-matching"},
    {ProblemKind::kGeneralMatching, "general-matching"},
    {ProblemKind::kTwoSidedMatching, "two-sided-matching"},
    {ProblemKind::kKMatching, "k-matching"},
    {ProblemKind::kCliquePacking, "clique-packing"},
    {ProblemKind::kCyclePacking, "cycle-packing"},
    {ProblemKind::kKConstrainedAllocation, "k-constrained-allocation"},
    {ProblemKind::kSocialChoice, "social-choice"},
};

constexpr KindEntry kAliases[] = {
    {ProblemKind::kOneSidedMatching, "one-sided"},
    {ProblemKind::kGeneralMatching, "general"},
    {ProblemKind::kTwoSidedMatching, "two-sided"},
    {ProblemKind::kKConstrainedAllocation, "allocation"},
    {ProblemKind::kSocialChoice, "sc"},
};

}  // namespace

std::string_view KindName(ProblemKind kind) {
  for (const auto& e : kKinds) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

ProblemKind ParseKind(std::string_view name) {
  for (const auto& e : kKinds) {
    if (e.name == name) return e.kind;
  }
  for (const auto& e : kAliases) {
    if (e.name == name) return e.kind;
  }
  throw ParameterError(fmt::format("unknown problem kind '{}'", name));
}

bool KindTakesK(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kKMatching:
    case ProblemKind::kCliquePacking:
    case ProblemKind::kCyclePacking:
    case ProblemKind::kKConstrainedAllocation:
      return true;
    default:
      return false;
  }
}

bool KindHasSideSplit(ProblemKind kind) {
  return kind == ProblemKind::kTwoSidedMatching ||
         kind == ProblemKind::kKConstrainedAllocation;
}

GraphModel::GraphModel(ProblemKind kind, int k, int n, int m,
                       const std::optional<SideSplit>& split)
    : kind_(kind), k_(k) {
  std::vector<char> split_side;  // 1 = N1, 2 = N2
  if (KindHasSideSplit(kind)) {
    if (!split) throw ParameterError("side_split required for this kind");
    split_side.assign(n, 0);
    for (int v : split->n1) split_side.at(v) = 1;
    for (int v : split->n2) split_side.at(v) = 2;
  }

  if (kind == ProblemKind::kSocialChoice) {
    agent_count_ = n;
    alternative_count_ = m;
  } else if (kind == ProblemKind::kOneSidedMatching) {
    agent_count_ = alternative_count_ = 2 * n;
  } else {
    agent_count_ = alternative_count_ = n;
  }
  const int rows = agent_count_;
  const int cols = alternative_count_;
  relevant_.assign(rows, {});
  relevant_mask_.assign(static_cast<std::size_t>(rows) * cols, 0);
  in_side1_.assign(rows, 0);
  in_side2_.assign(rows, 0);
  valued_.assign(rows, 1);

  auto add = [&](int i, int j) {
    relevant_[i].push_back(j);
    relevant_mask_[static_cast<std::size_t>(i) * cols + j] = 1;
  };

  switch (kind) {
    case ProblemKind::kSocialChoice:
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) add(i, j);
      break;
    case ProblemKind::kOneSidedMatching:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) add(i, n + j);
        side1_.push_back(i);
        in_side1_[i] = 1;
      }
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) add(n + j, i);
        side2_.push_back(n + j);
        in_side2_[n + j] = 1;
        valued_[n + j] = 0;
      }
      break;
    case ProblemKind::kTwoSidedMatching:
    case ProblemKind::kKConstrainedAllocation:
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          if (split_side[i] != split_side[j]) add(i, j);
        }
      }
      if (kind == ProblemKind::kKConstrainedAllocation) {
        side1_ = split->n1;
        side2_ = split->n2;
        std::sort(side1_.begin(), side1_.end());
        std::sort(side2_.begin(), side2_.end());
        for (int v : side1_) in_side1_[v] = 1;
        for (int v : side2_) {
          in_side2_[v] = 1;
          valued_[v] = 0;
        }
      } else {
        // Every agent queries and is assigned, so N1 = N2 = all nodes.
        for (int v = 0; v < rows; ++v) {
          side1_.push_back(v);
          side2_.push_back(v);
          in_side1_[v] = in_side2_[v] = 1;
        }
      }
      break;
    default:
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          if (i != j) add(i, j);
        }
        side1_.push_back(i);
        side2_.push_back(i);
        in_side1_[i] = in_side2_[i] = 1;
      }
      break;
  }
}

bool GraphModel::is_relevant(int agent, int alternative) const {
  if (agent < 0 || agent >= agent_count_ || alternative < 0 ||
      alternative >= alternative_count_) {
    return false;
  }
  return relevant_mask_[static_cast<std::size_t>(agent) * alternative_count_ +
                        alternative] != 0;
}

bool GraphModel::is_edge(int u, int v) const {
  if (is_social_choice()) return false;
  return is_relevant(u, v);
}

std::vector<std::pair<int, int>> GraphModel::edges() const {
  std::vector<std::pair<int, int>> out;
  if (is_social_choice()) return out;
  for (int u = 0; u < agent_count_; ++u) {
    for (int v : relevant_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

namespace {

void ValidateSplit(const SideSplit& split, int n) {
  std::vector<int> seen(n, 0);
  for (const auto* part : {&split.n1, &split.n2}) {
    for (int v : *part) {
      if (v < 0 || v >= n) {
        throw ParameterError(fmt::format("side_split node {} out of range", v));
      }
      if (seen[v]++) {
        throw ParameterError(fmt::format("node {} appears twice in side_split", v));
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!seen[v]) {
      throw ParameterError(fmt::format("node {} missing from side_split", v));
    }
  }
}

}  // namespace

Instance Instance::Make(ProblemKind kind, int k, ValuationProfile values,
                        std::optional<SideSplit> side_split) {
  const int n = values.rows();
  const int m = values.cols();
  if (n < 1) throw ParameterError("instance needs n >= 1");
  if (m < 1) throw ParameterError("instance needs m >= 1");
  if (kind != ProblemKind::kSocialChoice && m != n) {
    throw ParameterError(
        fmt::format("{} requires m = n (got n={}, m={})", KindName(kind), n, m));
  }
  if (!KindTakesK(kind)) {
    k = 1;
  } else {
    if (k < 1) throw ParameterError("k must be >= 1");
    if (kind == ProblemKind::kCliquePacking) {
      if (k < 2) throw ParameterError("clique-packing requires k >= 2");
      if (n % k != 0) {
        throw ParameterError(
            fmt::format("clique-packing requires k | n (n={}, k={})", n, k));
      }
    }
    if (kind == ProblemKind::kCyclePacking && k < 3) {
      throw ParameterError("cycle-packing requires k >= 3");
    }
  }
  if (KindHasSideSplit(kind)) {
    if (!side_split) {
      throw ParameterError(
          fmt::format("{} requires side_split", KindName(kind)));
    }
    ValidateSplit(*side_split, n);
  } else if (side_split) {
    throw ParameterError(
        fmt::format("{} does not take side_split", KindName(kind)));
  }

  Instance inst;
  inst.kind_ = kind;
  inst.k_ = k;
  inst.graph_ = GraphModel(kind, k, n, m, side_split);
  const GraphModel& g = inst.graph_;

  if (kind == ProblemKind::kOneSidedMatching) {
    inst.node_values_ = ValuationProfile(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) inst.node_values_.set(i, n + j, values(i, j));
  } else {
    inst.node_values_ = values;
    for (int i = 0; i < g.agent_count(); ++i) {
      for (int j = 0; j < g.alternative_count(); ++j) {
        if (values(i, j) == 0.0) continue;
        if (!g.is_relevant(i, j) || !g.is_valued(i)) {
          throw ParameterError(fmt::format(
              "value [{}][{}] must be 0: pair is not valued in {}", i, j,
              KindName(kind)));
        }
      }
    }
  }
  inst.values_ = std::move(values);
  inst.side_split_ = std::move(side_split);
  return inst;
}

FamilySpec FamilySpec::ForKind(ProblemKind kind, int k) {
  FamilySpec spec;
  spec.kind = kind;
  spec.k = KindTakesK(kind) ? k : 1;
  switch (kind) {
    case ProblemKind::kOneSidedMatching:
    case ProblemKind::kGeneralMatching:
    case ProblemKind::kTwoSidedMatching:
      spec.k_eff = 1;
      break;
    case ProblemKind::kKMatching:
    case ProblemKind::kKConstrainedAllocation:
      spec.k_eff = k;
      break;
    case ProblemKind::kCliquePacking:
    case ProblemKind::kCyclePacking:
      spec.k_eff = k - 1;
      break;
    case ProblemKind::kSocialChoice:
      throw ParameterError("social-choice has no solution family");
  }
  if (spec.k_eff < 1) throw ParameterError("family degree bound must be >= 1");
  return spec;
}

Subgraph::Subgraph(std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0) {
      throw MalformedSubgraphError(
          fmt::format("negative node in edge ({}, {})", e.u, e.v));
    }
    if (e.u == e.v) {
      throw MalformedSubgraphError(fmt::format("self-loop at node {}", e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    throw MalformedSubgraphError(
        fmt::format("duplicate edge ({}, {})", dup->u, dup->v));
  }
  edges_ = std::move(edges);
}

Subgraph Subgraph::FromPairs(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.push_back({u, v});
  return Subgraph(std::move(edges));
}

bool Subgraph::contains(Edge e) const {
  if (e.u > e.v) std::swap(e.u, e.v);
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

int Subgraph::node_bound() const {
  int b = 0;
  for (const auto& e : edges_) b = std::max(b, e.v + 1);
  return b;
}

std::vector<int> Subgraph::Degrees(int node_count) const {
  std::vector<int> deg(node_count, 0);
  for (const auto& e : edges_) {
    ++deg.at(e.u);
    ++deg.at(e.v);
  }
  return deg;
}

std::vector<std::vector<int>> Subgraph::Adjacency(int node_count) const {
  std::vector<std::vector<int>> adj(node_count);
  for (const auto& e : edges_) {
    adj.at(e.u).push_back(e.v);
    adj.at(e.v).push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

QueryTranscript::QueryTranscript(int agent_count, int budget)
    : budget_(budget), issued_(agent_count, 0) {
  if (budget < 1) throw ParameterError("query budget must be >= 1");
}

void QueryTranscript::Record(int agent, int alternative, double value) {
  if (agent < 0 || agent >= agent_count()) {
    throw ParameterError(fmt::format("query for unknown agent {}", agent));
  }
  if (issued_[agent] >= budget_) {
    throw BudgetExceededError(
        fmt::format("agent {} exceeded budget {}", agent, budget_));
  }
  ++issued_[agent];
  log_.push_back({agent, alternative});
  revealed_.emplace(std::make_pair(agent, alternative), value);
}

std::optional<double> QueryTranscript::revealed_value(int agent,
                                                      int alternative) const {
  auto it = revealed_.find({agent, alternative});
  if (it == revealed_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Union-find over node ids, used for component checks.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool CheckFeasible(const Subgraph& sub, const FamilySpec& spec,
                   const GraphModel& graph) {
  const int nodes = graph.node_count();
  if (sub.node_bound() > nodes) {
    throw MalformedSubgraphError(fmt::format(
        "subgraph references node {} but the instance has {} nodes",
        sub.node_bound() - 1, nodes));
  }
  if (graph.is_social_choice()) {
    throw ParameterError("social-choice instances have no subgraphs");
  }
  for (const auto& e : sub.edges()) {
    if (!graph.is_edge(e.u, e.v)) return false;
  }
  const auto deg = sub.Degrees(nodes);
  switch (spec.kind) {
    case ProblemKind::kOneSidedMatching:
      return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 1; });
    case ProblemKind::kGeneralMatching:
    case ProblemKind::kTwoSidedMatching:
      return std::all_of(deg.begin(), deg.end(), [](int d) { return d <= 1; });
    case ProblemKind::kKMatching:
      return std::all_of(deg.begin(), deg.end(),
                         [&](int d) { return d <= spec.k; });
    case ProblemKind::kKConstrainedAllocation:
      for (int v = 0; v < nodes; ++v) {
        const int cap = graph.in_side1(v) ? spec.k : 1;
        if (deg[v] > cap) return false;
      }
      return true;
    case ProblemKind::kCliquePacking: {
      if (nodes % spec.k != 0) return false;
      for (int d : deg) {
        if (d != spec.k - 1) return false;
      }
      Dsu dsu(nodes);
      for (const auto& e : sub.edges()) dsu.unite(e.u, e.v);
      std::vector<int> size(nodes, 0);
      for (int v = 0; v < nodes; ++v) ++size[dsu.find(v)];
      for (int v = 0; v < nodes; ++v) {
        if (dsu.find(v) == v && size[v] != spec.k) return false;
      }
      return true;
    }
    case ProblemKind::kCyclePacking: {
      for (int d : deg) {
        if (d != 0 && d != 2) return false;
      }
      // All degrees in {0, 2}: the edges form disjoint simple cycles.
      Dsu dsu(nodes);
      for (const auto& e : sub.edges()) dsu.unite(e.u, e.v);
      std::vector<int> size(nodes, 0);
      for (int v = 0; v < nodes; ++v) {
        if (deg[v] == 2) ++size[dsu.find(v)];
      }
      for (int v = 0; v < nodes; ++v) {
        if (size[v] != 0 && (size[v] < 3 || size[v] > spec.k)) return false;
      }
      return true;
    }
    case ProblemKind::kSocialChoice:
      break;
  }
  return false;
}

double TotalWeight(const Subgraph& sub, const ValuationProfile& node_values,
                   const QueryTranscript* restrict_to) {
  const int nodes = node_values.rows();
  if (sub.node_bound() > nodes || sub.node_bound() > node_values.cols()) {
    throw MalformedSubgraphError("subgraph references nodes outside the values");
  }
  auto contrib = [&](int i, int j) {
    if (restrict_to && !restrict_to->is_revealed(i, j)) return 0.0;
    return node_values(i, j);
  };
  double total = 0.0;
  for (const auto& e : sub.edges()) total += contrib(e.u, e.v) + contrib(e.v, e.u);
  return total;
}

double AlternativeWelfare(int alternative, const ValuationProfile& values,
                          const QueryTranscript* restrict_to) {
  if (alternative < 0 || alternative >= values.cols()) {
    throw InvalidAlternativeError(
        fmt::format("alternative {} out of range", alternative));
  }
  double total = 0.0;
  for (int i = 0; i < values.rows(); ++i) {
    if (restrict_to && !restrict_to->is_revealed(i, alternative)) continue;
    total += values(i, alternative);
  }
  return total;
}

}  // namespace twoq
