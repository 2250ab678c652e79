#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.h"
#include "twoq/adversary.h"
#include "twoq/errors.h"
#include "twoq/generators.h"
#include "twoq/harness.h"
#include "twoq/mechanisms.h"
#include "twoq/ordinal.h"
#include "twoq/random.h"
#include "twoq/solvers.h"

namespace twoq {
namespace {

using oracle::Close;

Instance WorkedExample() {
  return Instance::Make(ProblemKind::kOneSidedMatching, 1,
                        ValuationProfile::FromRows({{10, 1, 0.5, 0},
                                                    {8, 7, 1, 0},
                                                    {6, 2, 1, 0.5},
                                                    {3, 9, 2, 1}}));
}

void ExpectBudget(const QueryTranscript& t) {
  for (int i = 0; i < t.agent_count(); ++i) EXPECT_LE(t.issued(i), 2);
}

TEST(Match2q, SingleAgent) {
  const Instance inst = Instance::Make(ProblemKind::kOneSidedMatching, 1,
                                       ValuationProfile::FromRows({{3.5}}));
  const auto run = MatchTwoQueries(inst);
  EXPECT_EQ(*run.solution, Subgraph::FromPairs({{0, 1}}));
  EXPECT_DOUBLE_EQ(Distortion(OptimalWelfare(inst), AchievedWelfare(run, inst)), 1.0);
  // The SRA target is the top, so the second query repeats the first.
  EXPECT_EQ(run.transcript.issued(0), 2);
  EXPECT_EQ(run.transcript.revealed().size(), 1u);
}

TEST(Match2q, WorkedExample) {
  const Instance inst = WorkedExample();
  const auto run = MatchTwoQueries(inst);
  ASSERT_TRUE(run.sra);
  EXPECT_EQ(std::vector<int>(run.sra->assigned.begin(), run.sra->assigned.begin() + 4),
            (std::vector<int>{4, 4, 5, 5}));
  EXPECT_DOUBLE_EQ(run.revealed_objective, 19.0);
  ASSERT_TRUE(run.solution);
  EXPECT_TRUE(run.solution->contains({0, 4}));
  EXPECT_TRUE(run.solution->contains({3, 5}));
  EXPECT_DOUBLE_EQ(AchievedWelfare(run, inst), 20.5);
  std::vector<std::vector<double>> v(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v[i][j] = inst.values()(i, j);
  EXPECT_DOUBLE_EQ(oracle::BestAssignment(v), 20.5);
  ExpectBudget(run.transcript);
  EXPECT_DOUBLE_EQ(run.revealed_objective,
                   TotalWeight(*run.solution, inst.node_values(), &run.transcript));
}

TEST(Match2q, DistinctTopsGiveDistortionOne) {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + static_cast<int>(rng.UniformIndex(6));
    const auto tops = rng.Permutation(n);
    ValuationProfile v(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) v.set(i, j, RandomValue(rng));
      v.set(i, tops[i], 1000.5);
    }
    const Instance inst = Instance::Make(ProblemKind::kOneSidedMatching, 1, v);
    const auto run = MatchTwoQueries(inst);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rows[i][j] = v(i, j);
    EXPECT_TRUE(Close(AchievedWelfare(run, inst), oracle::BestAssignment(rows)));
  }
}

TEST(Match2q, RejectsOtherKindsAndInconsistentProfiles) {
  const Instance gm = Instance::Make(ProblemKind::kGeneralMatching, 1,
                                     ValuationProfile::FromRows({{0, 1}, {1, 0}}));
  EXPECT_THROW(MatchTwoQueries(gm), ParameterError);
  const Instance inst = WorkedExample();
  auto rankings = DeriveOrdinal(inst).rankings();
  std::swap(rankings[0][0], rankings[0][1]);
  EXPECT_THROW(MatchTwoQueries(inst, OrdinalProfile(rankings, 8)), ParameterError);
}

TEST(Oracle, EnforcesRelevanceAndBudget) {
  const Instance inst = WorkedExample();
  QueryOracle q(inst.node_values(), inst.graph());
  EXPECT_THROW(q.Ask(0, 1), InvalidAlternativeError);
  q.Ask(0, 4);
  q.Ask(0, 5);
  EXPECT_THROW(q.Ask(0, 6), BudgetExceededError);
}

TEST(General2q, SingleEdge) {
  const Instance inst = Instance::Make(ProblemKind::kGeneralMatching, 1,
                                       ValuationProfile::FromRows({{0, 2}, {3, 0}}));
  const auto run = GeneralTwoQueries(inst, FamilySpec::ForInstance(inst));
  EXPECT_EQ(*run.solution, Subgraph::FromPairs({{0, 1}}));
  EXPECT_DOUBLE_EQ(run.revealed_objective, 5.0);
  EXPECT_THROW(GeneralTwoQueries(inst, FamilySpec::ForKind(ProblemKind::kKMatching, 2)),
               ParameterError);
}

// Allocation with k = 1 on the split (agents | items) is one-sided matching
// without the perfectness requirement.
Instance AsAllocation(const Instance& os) {
  const int n = os.n();
  ValuationProfile v(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v.set(i, n + j, os.values()(i, j));
  SideSplit split;
  for (int i = 0; i < n; ++i) {
    split.n1.push_back(i);
    split.n2.push_back(n + i);
  }
  return Instance::Make(ProblemKind::kKConstrainedAllocation, 1, v, split);
}

TEST(General2q, AllocationWithKOneMatchesMatch2q) {
  Rng rng(43);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(5));
    const Instance os = RandomInstance({ProblemKind::kOneSidedMatching, n, n, 1}, rng);
    const Instance al = AsAllocation(os);
    const auto a = MatchTwoQueries(os);
    const auto b = GeneralTwoQueries(al, FamilySpec::ForInstance(al));
    EXPECT_EQ(a.transcript.revealed(), b.transcript.revealed());
    EXPECT_TRUE(Close(a.revealed_objective, b.revealed_objective));
    // The allocation output may drop zero-revealed edges; what it keeps
    // is part of the perfect matching.
    for (const auto& e : b.solution->edges()) {
      if (TotalWeight(Subgraph({e}), al.node_values(), &b.transcript) > 0) {
        EXPECT_TRUE(a.solution->contains(e));
      }
    }
  }
}

TEST(General2q, GuaranteeOnRandomGeneralMatchings) {
  Rng rng(47);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = RandomInstance({ProblemKind::kGeneralMatching, 8, 8, 1}, rng);
    const auto run = GeneralTwoQueries(inst, FamilySpec::ForInstance(inst));
    ExpectBudget(run.transcript);
    std::vector<std::vector<double>> v(8, std::vector<double>(8));
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) v[i][j] = inst.node_values()(i, j);
    const double opt = oracle::BestMatching(8, oracle::PairWeights(v));
    EXPECT_LE(opt, AchievedWelfare(run, inst) * (1 + 10 * ceil_sqrt(8)) * (1 + 1e-9));
    EXPECT_LE(opt, run.revealed_objective * (1 + 10 * ceil_sqrt(8)) * (1 + 1e-9));
  }
}

TEST(Sc2q, Examples) {
  const Instance two = Instance::Make(ProblemKind::kSocialChoice, 1,
                                      ValuationProfile::FromRows({{5, 0, 1, 0.5}, {0, 4, 1, 0.5}}));
  const auto out = ScTwoQueries(two, SrsMode::kTopChoices);
  const auto* run = std::get_if<MechanismRun>(&out);
  ASSERT_TRUE(run);
  EXPECT_EQ(run->srs->members, (std::vector<int>{0, 1}));
  EXPECT_EQ(run->winner, 0);
  EXPECT_DOUBLE_EQ(run->revealed_objective, 5.0);

  const Instance one = Instance::Make(ProblemKind::kSocialChoice, 1,
                                      ValuationProfile::FromRows({{1, 7, 3}}));
  const auto o = std::get<MechanismRun>(ScTwoQueries(one, SrsMode::kExact));
  EXPECT_EQ(o.winner, 1);

  const auto none = ScTwoQueries(GenSrsImpossible(3, 2), SrsMode::kExact);
  ASSERT_TRUE(std::holds_alternative<SrsNotFound>(none));
  const auto& t = std::get<SrsNotFound>(none).transcript;
  for (int i = 0; i < 12; ++i) EXPECT_EQ(t.issued(i), 1);
}

TEST(Sc2q, WinnerMaximizesRevealedWelfare) {
  Rng rng(53);
  for (int t = 0; t < 60; ++t) {
    const Instance inst = RandomInstance({ProblemKind::kSocialChoice, 6, 9, 1}, rng);
    const auto out = ScTwoQueries(inst, SrsMode::kExact);
    const auto* run = std::get_if<MechanismRun>(&out);
    if (!run) continue;
    ExpectBudget(run->transcript);
    for (int j = 0; j < 9; ++j) {
      const double w = AlternativeWelfare(j, inst.values(), &run->transcript);
      EXPECT_LE(w, run->revealed_objective);
      if (j < run->winner) EXPECT_LT(w, run->revealed_objective);
    }
  }
}

TEST(Mechanisms, QueriedPairsAreInvariantUnderRowScaling) {
  Rng rng(59);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = RandomInstance({ProblemKind::kGeneralMatching, 6, 6, 1}, rng);
    const int agent = static_cast<int>(rng.UniformIndex(6));
    ValuationProfile scaled = inst.values();
    for (int j = 0; j < 6; ++j) scaled.set(agent, j, inst.values()(agent, j) * 3.25);
    const Instance other = Instance::Make(ProblemKind::kGeneralMatching, 1, scaled);
    const auto a = GeneralTwoQueries(inst, FamilySpec::ForInstance(inst));
    const auto b = GeneralTwoQueries(other, FamilySpec::ForInstance(other));
    ASSERT_EQ(a.transcript.log().size(), b.transcript.log().size());
    for (std::size_t q = 0; q < a.transcript.log().size(); ++q) {
      EXPECT_EQ(a.transcript.log()[q].agent, b.transcript.log()[q].agent);
      EXPECT_EQ(a.transcript.log()[q].alternative, b.transcript.log()[q].alternative);
    }
  }
}

TEST(Decomposition, IdentityOnWorkedExample) {
  const Instance inst = WorkedExample();
  const auto run = MatchTwoQueries(inst);
  const auto self = DecomposeWelfare(run, *run.solution, inst);
  EXPECT_TRUE(self.identity_holds());
  EXPECT_DOUBLE_EQ(self.total, 20.5);
  EXPECT_DOUBLE_EQ(self.sw_r, 19.0);

  // The brute-force optimum coincides with the output here.
  const auto opt = SolveFamily(FamilySpec::ForInstance(inst), inst.graph(), inst.node_values());
  const auto d = DecomposeWelfare(run, opt.solution, inst);
  EXPECT_DOUBLE_EQ(d.sw_r + d.sw_c_geq + d.sw_c_lt, 20.5);
  std::vector<int> all = d.s_geq;
  all.insert(all.end(), d.s_lt.begin(), d.s_lt.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, d.s);
}

TEST(Decomposition, PropertiesOnRandomRuns) {
  Rng rng(61);
  for (int t = 0; t < 80; ++t) {
    const bool one_sided = t % 2 == 0;
    const Instance inst =
        one_sided ? RandomInstance({ProblemKind::kOneSidedMatching, 4, 4, 1}, rng)
                  : RandomInstance({ProblemKind::kKConstrainedAllocation, 8, 8, 2}, rng);
    const FamilySpec spec = FamilySpec::ForInstance(inst);
    const auto run = one_sided ? MatchTwoQueries(inst) : GeneralTwoQueries(inst, spec);
    const auto family = EnumerateFamily(spec, inst.graph());
    for (std::size_t r = 0; r < family.size(); r += 1 + family.size() / 25) {
      const auto d = DecomposeWelfare(run, family[r], inst);
      EXPECT_TRUE(d.identity_holds());
      EXPECT_LE(static_cast<int>(d.s_lt.size()), spec.k_eff * ceil_sqrt(static_cast<int>(
                                                                  inst.graph().side1().size())));
      EXPECT_LE(d.sw_c_geq, d.bound_geq * (1 + 1e-9) + 1e-9);
      EXPECT_LE(d.sw_c_lt, d.bound_lt * (1 + 1e-9) + 1e-9);
      std::vector<int> all = d.s_geq;
      all.insert(all.end(), d.s_lt.begin(), d.s_lt.end());
      std::sort(all.begin(), all.end());
      EXPECT_EQ(all, d.s);
      for (const auto& [alt, members] : d.s_geq_by_alternative) {
        for (int i : members) EXPECT_EQ(run.sra->assigned[i], alt);
      }
    }
  }
}

TEST(Decomposition, RejectsInfeasibleRival) {
  const Instance inst = WorkedExample();
  const auto run = MatchTwoQueries(inst);
  EXPECT_THROW(DecomposeWelfare(run, Subgraph::FromPairs({{0, 4}}), inst), ParameterError);
}

}  // namespace
}  // namespace twoq
