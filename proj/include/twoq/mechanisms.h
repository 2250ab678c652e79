#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twoq/core.h"
#include "twoq/ordinal.h"
#include "twoq/sra.h"

namespace twoq {

// Holds the hidden values; mechanisms only see answers to budgeted queries.
class QueryOracle {
 public:
  QueryOracle(const ValuationProfile& values, const GraphModel& graph, int budget = 2);

  // Throws InvalidAlternativeError for pairs outside the agent's relevant
  // set and BudgetExceededError once the agent's budget is spent.
  double Ask(int agent, int alternative);
  const QueryTranscript& transcript() const { return transcript_; }

 private:
  const ValuationProfile& values_;
  const GraphModel& graph_;
  QueryTranscript transcript_;
};

// Zero-filled matrix of the transcript's revealed values.
ValuationProfile RevealedValues(const QueryTranscript& t, int rows, int cols);

enum class MechanismKind { kMatch2q, kGeneral2q, kSc2q };

std::string_view MechanismName(MechanismKind kind);
MechanismKind ParseMechanism(std::string_view name);

struct MechanismRun {
  MechanismKind mechanism = MechanismKind::kMatch2q;
  std::optional<Subgraph> solution;  // graph kinds
  int winner = -1;                   // social choice
  QueryTranscript transcript;
  std::optional<SRAssignment> sra;
  std::optional<RepresentativeSet> srs;
  double revealed_objective = 0.0;
};

struct SrsNotFound {
  QueryTranscript transcript;
};

// The ordinal overloads take an explicit profile, which must be
// consistent with the instance values; otherwise the derived profile is
// used.
MechanismRun MatchTwoQueries(const Instance& inst);
MechanismRun MatchTwoQueries(const Instance& inst, const OrdinalProfile& ord);

MechanismRun GeneralTwoQueries(const Instance& inst, const FamilySpec& spec);
MechanismRun GeneralTwoQueries(const Instance& inst, const FamilySpec& spec,
                               const OrdinalProfile& ord);

std::variant<MechanismRun, SrsNotFound> ScTwoQueries(const Instance& inst, SrsMode mode);
std::variant<MechanismRun, SrsNotFound> ScTwoQueries(const Instance& inst, SrsMode mode,
                                                     const OrdinalProfile& ord);

struct WelfareDecomposition {
  double total = 0.0;       // SW(X)
  double sw_r = 0.0;        // revealed part of X
  double sw_c_geq = 0.0;
  double sw_c_lt = 0.0;
  double revealed_objective = 0.0;  // SW_R(Y)

  std::vector<int> s;       // agents with a concealed X-neighbour
  std::vector<int> s_geq;
  std::vector<int> s_lt;
  std::map<int, std::vector<int>> s_geq_by_alternative;
  std::map<int, std::vector<int>> concealed_neighbors;  // N_X(i), i in S
  std::map<int, int> favorite_neighbor;                 // chi_i

  int copies = 0;
  int k_eff = 1;
  // Bounds the analysis proves for the two concealed parts.
  double bound_geq = 0.0;
  double bound_lt = 0.0;
  int bound_s_lt = 0;  // k_eff * copies

  bool identity_holds(double tol = 1e-9) const;
};

// Splits SW(x) for a feasible rival x of a graph-kind run.
WelfareDecomposition DecomposeWelfare(const MechanismRun& run, const Subgraph& x,
                                      const Instance& inst);

}  // namespace twoq
