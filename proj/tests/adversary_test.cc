#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "oracles.h"
#include "twoq/adversary.h"
#include "twoq/errors.h"
#include "twoq/generators.h"
#include "twoq/harness.h"
#include "twoq/mechanisms.h"
#include "twoq/ordinal.h"
#include "twoq/random.h"

namespace twoq {
namespace {

TEST(LowerBound, LayerSizesAndValues) {
  EXPECT_EQ(LowerBoundLayerSizes(16, 2), (std::vector<int>{8, 2, 2, 4}));
  const auto lb = GenLowerBound(16, 2, 0);
  EXPECT_EQ(lb.layout.layer_sizes, (std::vector<int>{8, 2, 2, 4}));
  ASSERT_EQ(lb.layout.position_values.size(), 3u);
  EXPECT_DOUBLE_EQ(lb.layout.position_values[0], 0.25);
  EXPECT_DOUBLE_EQ(lb.layout.position_values[1], 0.0625);
  EXPECT_DOUBLE_EQ(lb.layout.position_values[2], 0.015625);
  EXPECT_THROW(LowerBoundLayerSizes(4, 2), ParameterError);
  EXPECT_THROW(LowerBoundLayerSizes(2, 1), ParameterError);
  const auto one = LowerBoundLayerSizes(16, 1);
  EXPECT_EQ(one[0], 8);
  EXPECT_EQ(one[1], 2);
}

TEST(LowerBound, StructureAcrossSizes) {
  for (auto [m, lambda] : std::vector<std::pair<int, int>>{{16, 2}, {64, 2}, {256, 2}, {27, 3}, {16, 1}}) {
    const auto lb = GenLowerBound(m, lambda, 5);
    const auto& lay = lb.layout;
    int total = 0;
    for (int s : lay.layer_sizes) total += s;
    EXPECT_EQ(total, m);
    EXPECT_TRUE(CheckConsistency(lb.ordinal, lb.instance.values()));
    EXPECT_EQ(DeriveOrdinal(lb.instance).rankings().size(), static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      // Position l holds an A_l alternative.
      for (int l = 1; l <= lambda + 1; ++l) {
        EXPECT_EQ(lay.layer_of[lb.ordinal.ranking(i)[l - 1]], l);
      }
    }
    for (int l = 1; l <= lambda + 1; ++l) {
      for (int j : lay.layers[l - 1]) {
        const auto& block = lay.blocks[l - 1][j];
        EXPECT_FALSE(block.empty());
        // Canonical welfare: block size times the position value.
        EXPECT_NEAR(AlternativeWelfare(j, lb.instance.values()),
                    static_cast<double>(block.size()) * lay.position_values[l - 1], 1e-12);
        if (l > 1) continue;
        // Agents sharing a position-l alternative share the next one.
        std::set<int> next;
        for (int i : block) next.insert(lb.ordinal.ranking(i)[1]);
        EXPECT_EQ(next.size(), 1u);
      }
    }
  }
}

TEST(LowerBound, DeterministicPerSeed) {
  EXPECT_EQ(GenLowerBound(64, 2, 3).ordinal, GenLowerBound(64, 2, 3).ordinal);
  EXPECT_NE(GenLowerBound(64, 2, 3).ordinal, GenLowerBound(64, 2, 4).ordinal);
}

TEST(SrsImpossible, Construction) {
  const Instance inst = GenSrsImpossible(3, 2);
  EXPECT_EQ(inst.n(), 12);
  EXPECT_EQ(inst.m(), 3);
  std::set<std::vector<int>> orders;
  const auto ord = DeriveOrdinal(inst);
  for (int i = 0; i < 12; ++i) orders.insert(ord.ranking(i));
  EXPECT_EQ(orders.size(), 6u);
  EXPECT_THROW(GenSrsImpossible(1, 2), ParameterError);
  EXPECT_THROW(GenSrsImpossible(4, 2), ParameterError);
}

// Best value of sum coef*z over monotone z drawn from `levels`.
double GridBest(const std::vector<double>& coef, const std::vector<std::optional<double>>& pins,
                const std::vector<double>& levels) {
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double, double)> rec = [&](std::size_t p, double cap, double s) {
    if (p == coef.size()) {
      best = std::max(best, s);
      return;
    }
    if (pins[p]) {
      if (*pins[p] <= cap + 1e-15) rec(p + 1, *pins[p], s + coef[p] * *pins[p]);
      return;
    }
    for (double z : levels) {
      if (z <= cap + 1e-15) rec(p + 1, z, s + coef[p] * z);
    }
  };
  rec(0, std::numeric_limits<double>::infinity(), 0.0);
  return best;
}

TEST(ChainSolve, MatchesGridSearch) {
  Rng rng(71);
  for (int t = 0; t < 200; ++t) {
    const int len = 1 + static_cast<int>(rng.UniformIndex(5));
    std::vector<double> coef(len);
    for (auto& c : coef) c = static_cast<double>(rng.UniformInt(-3, 3));
    std::vector<std::optional<double>> pins(len);
    double level = 1 + RandomValue(rng);
    pins[0] = level;
    for (int p = 1; p < len; ++p) {
      if (rng.Bernoulli(0.4)) {
        level *= rng.Bernoulli(0.5) ? 1.0 : 0.5;
        pins[p] = level;
      }
    }
    std::vector<double> levels{0.0};
    for (const auto& x : pins)
      if (x) levels.push_back(*x);
    const std::size_t base = levels.size();
    for (std::size_t a = 0; a < base; ++a)
      for (std::size_t b = 0; b < base; ++b)
        for (double f : {0.25, 0.5}) levels.push_back(levels[a] + f * (levels[b] - levels[a]));
    const auto sol = ChainSolve(coef, pins);
    EXPECT_NEAR(sol.value, GridBest(coef, pins, levels), 1e-9 * std::max(1.0, std::abs(sol.value)));
    double s = 0;
    for (int p = 0; p < len; ++p) {
      s += coef[p] * sol.z[p];
      EXPECT_GE(sol.z[p], 0.0);
      if (p) EXPECT_LE(sol.z[p], sol.z[p - 1]);
      if (pins[p]) EXPECT_EQ(sol.z[p], *pins[p]);
    }
    EXPECT_NEAR(s, sol.value, 1e-9 * std::max(1.0, std::abs(s)));
  }
}

TEST(ChainSolve, RejectsBadPins) {
  EXPECT_THROW(ChainSolve({1.0, 1.0}, {std::nullopt, 1.0}), UnboundedError);
  EXPECT_THROW(ChainSolve({1.0, 1.0}, {1.0, 2.0}), ParameterError);
  EXPECT_THROW(ChainSolve({1.0}, {-1.0}), ParameterError);
}

TEST(CompletionSc, FullyRevealedProfileIsItsOwnCompletion) {
  Rng rng(73);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = RandomInstance({ProblemKind::kSocialChoice, 5, 2, 1}, rng);
    const auto ord = DeriveOrdinal(inst);
    QueryTranscript tr(5, 2);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 2; ++j) tr.Record(i, j, inst.values()(i, j));
    const int y = static_cast<int>(rng.UniformIndex(2));
    const auto res = AdversarialCompletionSc(ord, tr, y);
    EXPECT_EQ(res.values, inst.values());
    const double wy = AlternativeWelfare(y, inst.values());
    const double best = std::max(AlternativeWelfare(0, inst.values()),
                                 AlternativeWelfare(1, inst.values()));
    EXPECT_NEAR(res.ratio, best / wy, 1e-9 * best / wy);
  }
}

TEST(CompletionSc, ZeroWinnerWelfareIsInfinite) {
  const OrdinalProfile ord({{0, 1}}, 2);
  QueryTranscript tr(1, 2);
  tr.Record(0, 0, 1.0);
  const auto res = AdversarialCompletionSc(ord, tr, 1);
  EXPECT_TRUE(res.infinite);
  EXPECT_TRUE(std::isinf(res.ratio));
  EXPECT_EQ(res.rival_alternative, 0);
  EXPECT_EQ(res.values(0, 1), 0.0);
  EXPECT_EQ(Distortion(1.0, 0.0), std::numeric_limits<double>::infinity());
}

TEST(CompletionSc, UnrevealedTopIsUnbounded) {
  const OrdinalProfile ord({{0, 1}}, 2);
  QueryTranscript tr(1, 2);
  tr.Record(0, 1, 1.0);
  EXPECT_THROW(AdversarialCompletionSc(ord, tr, 1), UnboundedError);
}

TEST(CompletionSc, DominatesTrueRatioAndIsConsistent) {
  Rng rng(79);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const Instance inst = RandomInstance({ProblemKind::kSocialChoice, 7, 9, 1}, rng);
    const auto ord = DeriveOrdinal(inst);
    const auto out = ScTwoQueries(inst, SrsMode::kExact);
    const auto* run = std::get_if<MechanismRun>(&out);
    if (!run) continue;
    ++checked;
    const auto res = AdversarialCompletionSc(ord, run->transcript, run->winner);
    EXPECT_TRUE(CheckConsistency(ord, res.values));
    for (const auto& [key, v] : run->transcript.revealed()) {
      EXPECT_EQ(res.values(key.first, key.second), v);
    }
    const double wy = AlternativeWelfare(run->winner, res.values);
    const double wx = AlternativeWelfare(res.rival_alternative, res.values);
    EXPECT_NEAR(res.ratio, wx / wy, 1e-12 * wx / wy);
    const double truth = Distortion(OptimalWelfare(inst), AchievedWelfare(*run, inst));
    EXPECT_GE(res.ratio, truth * (1 - 1e-5));
    // Restricting the rivals can only lower the ratio.
    const auto one = AdversarialCompletionSc(ord, run->transcript, run->winner, {0});
    EXPECT_LE(one.ratio, res.ratio * (1 + 1e-5));
  }
  EXPECT_GT(checked, 20);
}

TEST(CompletionGraph, ImplicitRivalsMatchEnumeration) {
  Rng rng(83);
  for (int t = 0; t < 30; ++t) {
    const bool one_sided = t % 2 == 0;
    const Instance inst = one_sided
                              ? RandomInstance({ProblemKind::kOneSidedMatching, 4, 4, 1}, rng)
                              : RandomInstance({ProblemKind::kGeneralMatching, 6, 6, 1}, rng);
    const FamilySpec spec = FamilySpec::ForInstance(inst);
    const auto ord = DeriveOrdinal(inst);
    const auto run = one_sided ? MatchTwoQueries(inst) : GeneralTwoQueries(inst, spec);
    const auto implicit =
        AdversarialCompletionGraph(inst.graph(), spec, ord, run.transcript, *run.solution);
    const auto family = EnumerateFamily(spec, inst.graph());
    const auto explicit_ =
        AdversarialCompletionGraph(inst.graph(), spec, ord, run.transcript, *run.solution, &family);
    ASSERT_EQ(implicit.infinite, explicit_.infinite);
    if (!implicit.infinite) {
      EXPECT_NEAR(implicit.ratio, explicit_.ratio, 1e-5 * explicit_.ratio);
      const double truth = Distortion(OptimalWelfare(inst), AchievedWelfare(run, inst));
      EXPECT_GE(implicit.ratio, truth * (1 - 1e-5));
      EXPECT_TRUE(CheckConsistency(ord, implicit.values));
      ASSERT_TRUE(implicit.rival_solution);
      EXPECT_TRUE(CheckFeasible(*implicit.rival_solution, spec, inst.graph()));
      EXPECT_NEAR(implicit.ratio,
                  TotalWeight(*implicit.rival_solution, implicit.values) /
                      TotalWeight(*run.solution, implicit.values),
                  1e-9 * implicit.ratio);
    }
  }
}

TEST(CompletionGraph, EnumeratedFamilyForDegreeTwo) {
  Rng rng(89);
  for (int t = 0; t < 10; ++t) {
    const Instance inst = RandomInstance({ProblemKind::kKConstrainedAllocation, 6, 6, 2}, rng);
    const FamilySpec spec = FamilySpec::ForInstance(inst);
    const auto ord = DeriveOrdinal(inst);
    const auto run = GeneralTwoQueries(inst, spec);
    const auto res =
        AdversarialCompletionGraph(inst.graph(), spec, ord, run.transcript, *run.solution);
    if (res.infinite) continue;
    const double truth = Distortion(OptimalWelfare(inst), AchievedWelfare(run, inst));
    EXPECT_GE(res.ratio, truth * (1 - 1e-5));
    EXPECT_TRUE(CheckConsistency(ord, res.values));
  }
  const Instance cp = Instance::Make(ProblemKind::kCliquePacking, 3, ValuationProfile(9, 9));
  EXPECT_THROW(EnumerateFamily(FamilySpec::ForInstance(cp), cp.graph()), SizeLimitError);
}

TEST(EnumerateFamily, CountsMatchings) {
  const Instance gm = Instance::Make(ProblemKind::kGeneralMatching, 1, ValuationProfile(4, 4));
  // Empty, six single edges, three perfect matchings.
  EXPECT_EQ(EnumerateFamily(FamilySpec::ForInstance(gm), gm.graph()).size(), 10u);
  const Instance os = Instance::Make(ProblemKind::kOneSidedMatching, 1, ValuationProfile(3, 3));
  EXPECT_EQ(EnumerateFamily(FamilySpec::ForInstance(os), os.graph()).size(), 6u);
}

}  // namespace
}  // namespace twoq
