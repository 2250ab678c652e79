#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twoq {

// Smallest r with r * r >= n. Every sqrt(n) threshold in the library goes
// through this.
int ceil_sqrt(int n);

// Dense row-major matrix of doubles with no sign restriction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }
  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Nonnegative finite cardinal values v[i][j] of agent i for alternative j.
class ValuationProfile {
 public:
  ValuationProfile() = default;
  ValuationProfile(int rows, int cols) : matrix_(rows, cols) {}
  // Throws ParseError on ragged rows or negative / non-finite entries.
  static ValuationProfile FromRows(const std::vector<std::vector<double>>& rows);

  int rows() const { return matrix_.rows(); }
  int cols() const { return matrix_.cols(); }
  double operator()(int i, int j) const { return matrix_(i, j); }
  std::span<const double> row(int i) const { return matrix_.row(i); }
  // Throws ParameterError on negative or non-finite values.
  void set(int i, int j, double value);
  const Matrix& matrix() const { return matrix_; }
  bool operator==(const ValuationProfile&) const = default;

 private:
  Matrix matrix_;
};

enum class ProblemKind {
  kOneSidedMatching,
  kGeneralMatching,
  kTwoSidedMatching,
  kKMatching,
  kCliquePacking,
  kCyclePacking,
  kKConstrainedAllocation,
  kSocialChoice,
};

std::string_view KindName(ProblemKind kind);
// Accepts the canonical names plus the short aliases "one-sided",
// "general", "two-sided", "allocation", "sc".
ProblemKind ParseKind(std::string_view name);
bool KindTakesK(ProblemKind kind);
// Kinds whose agents are split into two sides by an explicit side_split.
bool KindHasSideSplit(ProblemKind kind);

struct SideSplit {
  std::vector<int> n1;
  std::vector<int> n2;
  bool operator==(const SideSplit&) const = default;
};

// Value-free structure of an instance after normalization: one-sided items
// become dummy nodes n..2n-1, so every graph kind is a graph on
// node_count() nodes. For social choice, rows are agents and columns are
// alternatives and there are no edges.
class GraphModel {
 public:
  GraphModel() = default;
  GraphModel(ProblemKind kind, int k, int n, int m,
             const std::optional<SideSplit>& split);

  ProblemKind kind() const { return kind_; }
  int k() const { return k_; }
  bool is_social_choice() const {
    return kind_ == ProblemKind::kSocialChoice;
  }
  // Rows of the normalized value matrix.
  int agent_count() const { return agent_count_; }
  // Columns of the normalized value matrix.
  int alternative_count() const { return alternative_count_; }
  // Graph kinds only.
  int node_count() const { return agent_count_; }

  // Alternatives an agent ranks, ascending.
  const std::vector<int>& relevant(int agent) const { return relevant_[agent]; }
  bool is_relevant(int agent, int alternative) const;
  bool is_edge(int u, int v) const;
  // All edges of the underlying graph as (u < v) pairs, sorted.
  std::vector<std::pair<int, int>> edges() const;

  // The (N1, N2) pair used by the two-query mechanisms.
  const std::vector<int>& side1() const { return side1_; }
  const std::vector<int>& side2() const { return side2_; }
  bool in_side1(int node) const { return in_side1_[node] != 0; }
  bool in_side2(int node) const { return in_side2_[node] != 0; }
  // Agents whose rows may carry nonzero values.
  bool is_valued(int agent) const { return valued_[agent] != 0; }

 private:
  ProblemKind kind_ = ProblemKind::kGeneralMatching;
  int k_ = 1;
  int agent_count_ = 0;
  int alternative_count_ = 0;
  std::vector<std::vector<int>> relevant_;
  std::vector<char> relevant_mask_;
  std::vector<int> side1_;
  std::vector<int> side2_;
  std::vector<char> in_side1_;
  std::vector<char> in_side2_;
  std::vector<char> valued_;
};

class Instance {
 public:
  // Validates every structural invariant; throws ParameterError.
  static Instance Make(ProblemKind kind, int k, ValuationProfile values,
                       std::optional<SideSplit> side_split = std::nullopt);

  ProblemKind kind() const { return kind_; }
  int k() const { return k_; }
  int n() const { return values_.rows(); }
  int m() const { return values_.cols(); }
  const ValuationProfile& values() const { return values_; }
  const std::optional<SideSplit>& side_split() const { return side_split_; }

  const GraphModel& graph() const { return graph_; }
  // Values in the normalized node space of graph().
  const ValuationProfile& node_values() const { return node_values_; }

  bool operator==(const Instance& other) const {
    return kind_ == other.kind_ && k_ == other.k_ &&
           values_ == other.values_ && side_split_ == other.side_split_;
  }

 private:
  ProblemKind kind_ = ProblemKind::kGeneralMatching;
  int k_ = 1;
  ValuationProfile values_;
  std::optional<SideSplit> side_split_;
  GraphModel graph_;
  ValuationProfile node_values_;
};

// Feasible-solution family with its degree bound k_eff. k_eff is stored
// rather than recomputed so a deliberately wrong descriptor can be built.
struct FamilySpec {
  ProblemKind kind = ProblemKind::kGeneralMatching;
  int k = 1;
  int k_eff = 1;

  static FamilySpec ForKind(ProblemKind kind, int k);
  static FamilySpec ForInstance(const Instance& inst) {
    return ForKind(inst.kind(), inst.k());
  }
};

struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

// Undirected simple edge set, stored with u < v and sorted.
class Subgraph {
 public:
  Subgraph() = default;
  // Throws MalformedSubgraphError on self-loops, duplicates or negative ids.
  explicit Subgraph(std::vector<Edge> edges);
  static Subgraph FromPairs(const std::vector<std::pair<int, int>>& pairs);

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  bool contains(Edge e) const;
  // One past the largest node id, 0 when empty.
  int node_bound() const;
  std::vector<int> Degrees(int node_count) const;
  std::vector<std::vector<int>> Adjacency(int node_count) const;

  std::optional<double> weight() const { return weight_; }
  void set_weight(double w) { weight_ = w; }

  bool operator==(const Subgraph& other) const { return edges_ == other.edges_; }

 private:
  std::vector<Edge> edges_;
  std::optional<double> weight_;
};

struct Query {
  int agent = 0;
  int alternative = 0;
};

// Revealed (agent, alternative) values plus per-agent issued-query counts.
class QueryTranscript {
 public:
  QueryTranscript() = default;
  QueryTranscript(int agent_count, int budget);

  // Counts against the budget even when the pair was already revealed.
  void Record(int agent, int alternative, double value);

  int budget() const { return budget_; }
  int agent_count() const { return static_cast<int>(issued_.size()); }
  int issued(int agent) const { return issued_[agent]; }
  bool is_revealed(int agent, int alternative) const {
    return revealed_.count({agent, alternative}) != 0;
  }
  std::optional<double> revealed_value(int agent, int alternative) const;
  const std::map<std::pair<int, int>, double>& revealed() const {
    return revealed_;
  }
  // Issued queries in issue order.
  const std::vector<Query>& log() const { return log_; }

 private:
  int budget_ = 2;
  std::vector<int> issued_;
  std::map<std::pair<int, int>, double> revealed_;
  std::vector<Query> log_;
};

// Throws MalformedSubgraphError if sub references nodes outside the graph.
bool CheckFeasible(const Subgraph& sub, const FamilySpec& spec,
                   const GraphModel& graph);

// Sum over edges {i, j} of v_i(j) + v_j(i); with a transcript only revealed
// directed entries count.
double TotalWeight(const Subgraph& sub, const ValuationProfile& node_values,
                   const QueryTranscript* restrict_to = nullptr);

// Social-choice welfare of one alternative.
double AlternativeWelfare(int alternative, const ValuationProfile& values,
                          const QueryTranscript* restrict_to = nullptr);

}  // namespace twoq
