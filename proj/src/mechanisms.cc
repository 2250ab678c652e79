#include "twoq/mechanisms.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "twoq/errors.h"
#include "twoq/solvers.h"

namespace twoq {

QueryOracle::QueryOracle(const ValuationProfile& values, const GraphModel& graph,
                         int budget)
    : values_(values), graph_(graph), transcript_(graph.agent_count(), budget) {}

double QueryOracle::Ask(int agent, int alternative) {
  if (!graph_.is_relevant(agent, alternative)) {
    throw InvalidAlternativeError(
        fmt::format("agent {} cannot be asked about {}", agent, alternative));
  }
  const double v = values_(agent, alternative);
  transcript_.Record(agent, alternative, v);
  return v;
}

ValuationProfile RevealedValues(const QueryTranscript& t, int rows, int cols) {
  ValuationProfile r(rows, cols);
  for (const auto& [key, v] : t.revealed()) r.set(key.first, key.second, v);
  return r;
}

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kMatch2q:
      return "match2q";
    case MechanismKind::kGeneral2q:
      return "general2q";
    case MechanismKind::kSc2q:
      return "sc2q";
  }
  return "unknown";
}

MechanismKind ParseMechanism(std::string_view name) {
  if (name == "match2q") return MechanismKind::kMatch2q;
  if (name == "general2q") return MechanismKind::kGeneral2q;
  if (name == "sc2q") return MechanismKind::kSc2q;
  throw ParameterError(fmt::format("unknown mechanism '{}'", name));
}

namespace {

void RequireConsistent(const Instance& inst, const OrdinalProfile& ord) {
  if (!ord.MatchesGraph(inst.graph())) {
    throw ParameterError("ordinal profile does not rank the instance's relevant sets");
  }
  if (!CheckConsistency(ord, inst.node_values())) {
    throw ParameterError("ordinal profile is inconsistent with the instance values");
  }
}

// Both graph mechanisms: top query, serial dictatorship, assignment query,
// then a revealed-weight optimum of the family. Sees values only through
// the oracle.
MechanismRun RunGraphMechanism(MechanismKind kind, const GraphModel& g,
                               const OrdinalProfile& ord, const FamilySpec& spec,
                               QueryOracle& oracle) {
  const auto& n1 = g.side1();
  const auto& n2 = g.side2();
  std::vector<char> in_n2(g.alternative_count(), 0);
  for (int j : n2) in_n2[j] = 1;
  for (int i : n1) {
    const int fav = ord.FavoriteIn(i, in_n2);
    if (fav != -1) oracle.Ask(i, fav);
  }
  SRAssignment sra = SerialDictatorship(ord, n1, n2);
  for (int i : n1) {
    if (sra.assigned[i] != -1) oracle.Ask(i, sra.assigned[i]);
  }
  const ValuationProfile revealed =
      RevealedValues(oracle.transcript(), g.agent_count(), g.alternative_count());
  SolverResult best = SolveFamily(spec, g, revealed);
  MechanismRun run;
  run.mechanism = kind;
  run.revealed_objective = TotalWeight(best.solution, revealed);
  run.solution = std::move(best.solution);
  run.transcript = oracle.transcript();
  run.sra = std::move(sra);
  return run;
}

}  // namespace

MechanismRun MatchTwoQueries(const Instance& inst) {
  return MatchTwoQueries(inst, DeriveOrdinal(inst));
}

MechanismRun MatchTwoQueries(const Instance& inst, const OrdinalProfile& ord) {
  if (inst.kind() != ProblemKind::kOneSidedMatching) {
    throw ParameterError("match2q needs a one-sided-matching instance");
  }
  RequireConsistent(inst, ord);
  QueryOracle oracle(inst.node_values(), inst.graph());
  return RunGraphMechanism(MechanismKind::kMatch2q, inst.graph(), ord,
                           FamilySpec::ForInstance(inst), oracle);
}

MechanismRun GeneralTwoQueries(const Instance& inst, const FamilySpec& spec) {
  return GeneralTwoQueries(inst, spec, DeriveOrdinal(inst));
}

MechanismRun GeneralTwoQueries(const Instance& inst, const FamilySpec& spec,
                               const OrdinalProfile& ord) {
  if (inst.kind() == ProblemKind::kSocialChoice) {
    throw ParameterError("general2q needs a graph instance");
  }
  if (spec.kind != inst.kind() || spec.k != inst.k()) {
    throw ParameterError(fmt::format("family {} (k={}) does not match instance kind {} (k={})",
                                     KindName(spec.kind), spec.k, KindName(inst.kind()),
                                     inst.k()));
  }
  RequireConsistent(inst, ord);
  QueryOracle oracle(inst.node_values(), inst.graph());
  return RunGraphMechanism(MechanismKind::kGeneral2q, inst.graph(), ord, spec, oracle);
}

std::variant<MechanismRun, SrsNotFound> ScTwoQueries(const Instance& inst, SrsMode mode) {
  return ScTwoQueries(inst, mode, DeriveOrdinal(inst));
}

std::variant<MechanismRun, SrsNotFound> ScTwoQueries(const Instance& inst, SrsMode mode,
                                                     const OrdinalProfile& ord) {
  if (inst.kind() != ProblemKind::kSocialChoice) {
    throw ParameterError("sc2q needs a social-choice instance");
  }
  RequireConsistent(inst, ord);
  const GraphModel& g = inst.graph();
  QueryOracle oracle(inst.node_values(), g);
  for (int i = 0; i < g.agent_count(); ++i) oracle.Ask(i, ord.top(i));
  auto srs = FindRepresentativeSet(ord, mode);
  if (!srs) return SrsNotFound{oracle.transcript()};
  std::vector<char> in_b(g.alternative_count(), 0);
  for (int j : srs->members) in_b[j] = 1;
  for (int i = 0; i < g.agent_count(); ++i) oracle.Ask(i, ord.FavoriteIn(i, in_b));

  const QueryTranscript& t = oracle.transcript();
  std::vector<double> welfare(g.alternative_count(), 0.0);
  for (const auto& [key, v] : t.revealed()) welfare[key.second] += v;
  int winner = 0;
  for (int j = 1; j < g.alternative_count(); ++j) {
    if (welfare[j] > welfare[winner]) winner = j;
  }
  MechanismRun run;
  run.mechanism = MechanismKind::kSc2q;
  run.winner = winner;
  run.revealed_objective = welfare[winner];
  run.transcript = t;
  run.srs = std::move(srs);
  return run;
}

bool WelfareDecomposition::identity_holds(double tol) const {
  return std::abs(total - (sw_r + sw_c_geq + sw_c_lt)) <=
         tol * std::max(1.0, std::abs(total));
}

WelfareDecomposition DecomposeWelfare(const MechanismRun& run, const Subgraph& x,
                                      const Instance& inst) {
  if (!run.solution || !run.sra) {
    throw ParameterError("welfare decomposition needs a graph mechanism run");
  }
  const GraphModel& g = inst.graph();
  const FamilySpec spec = FamilySpec::ForInstance(inst);
  if (!CheckFeasible(x, spec, g)) throw ParameterError("rival solution is infeasible");
  const ValuationProfile& v = inst.node_values();
  const QueryTranscript& t = run.transcript;
  const auto adj = x.Adjacency(g.node_count());

  WelfareDecomposition d;
  d.total = TotalWeight(x, v);
  d.revealed_objective = run.revealed_objective;
  d.copies = run.sra->copies;
  d.k_eff = spec.k_eff;
  for (int i : g.side1()) {
    if (adj[i].empty()) continue;
    std::vector<int> concealed;
    int chi = adj[i].front();
    for (int j : adj[i]) {
      if (v(i, j) > v(i, chi)) chi = j;
      if (t.is_revealed(i, j)) {
        d.sw_r += v(i, j);
      } else {
        concealed.push_back(j);
      }
    }
    if (concealed.empty()) continue;
    d.s.push_back(i);
    d.concealed_neighbors[i] = concealed;
    d.favorite_neighbor[i] = chi;
    double part = 0.0;
    for (int j : concealed) part += v(i, j);
    const int alpha = run.sra->assigned[i];
    if (alpha != -1 && v(i, alpha) >= v(i, chi)) {
      d.s_geq.push_back(i);
      d.s_geq_by_alternative[alpha].push_back(i);
      d.sw_c_geq += part;
    } else {
      d.s_lt.push_back(i);
      d.sw_c_lt += part;
    }
  }
  // Rows outside N1 carry no value but are added so the identity is exact.
  for (int i = 0; i < g.node_count(); ++i) {
    if (g.in_side1(i)) continue;
    for (int j : adj[i]) d.sw_r += v(i, j);
  }
  const double ry = run.revealed_objective;
  const double c = d.copies;
  const double k = d.k_eff;
  if (inst.kind() == ProblemKind::kOneSidedMatching) {
    d.bound_geq = c * ry;
    d.bound_lt = c * ry;
  } else {
    d.bound_geq = 9.0 * k * k * c * ry;
    d.bound_lt = k * k * c * ry;
  }
  d.bound_s_lt = d.k_eff * d.copies;
  return d;
}

}  // namespace twoq
