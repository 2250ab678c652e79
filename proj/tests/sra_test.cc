#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.h"
#include "twoq/adversary.h"
#include "twoq/errors.h"
#include "twoq/generators.h"
#include "twoq/ordinal.h"
#include "twoq/random.h"
#include "twoq/sra.h"

namespace twoq {
namespace {

// n agents 0..n-1 ranking items n..2n-1; items rank nothing.
OrdinalProfile AgentsOverItems(const std::vector<std::vector<int>>& item_rankings) {
  const int n = static_cast<int>(item_rankings.size());
  std::vector<std::vector<int>> r(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j : item_rankings[i]) r[i].push_back(n + j);
  return OrdinalProfile(r, 2 * n);
}

std::vector<int> Range(int from, int to) {
  std::vector<int> v(to - from);
  std::iota(v.begin(), v.end(), from);
  return v;
}

TEST(SerialDictatorship, SingleAgent) {
  const auto ord = AgentsOverItems({{0}});
  const auto a = SerialDictatorship(ord, {0}, {1});
  EXPECT_EQ(a.copies, 1);
  EXPECT_EQ(a.assigned[0], 1);
}

TEST(SerialDictatorship, FourAgentExamples) {
  // a, b, c, d are items 4..7.
  const auto mixed = AgentsOverItems({{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}, {1, 0, 2, 3}});
  const auto a = SerialDictatorship(mixed, Range(0, 4), Range(4, 8));
  EXPECT_EQ(a.copies, 2);
  EXPECT_EQ(std::vector<int>(a.assigned.begin(), a.assigned.begin() + 4),
            (std::vector<int>{4, 4, 5, 5}));
  ASSERT_FALSE(a.exhausted.empty());
  EXPECT_EQ(a.exhausted.front(), 4);

  const auto shared = AgentsOverItems({{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}});
  const auto b = SerialDictatorship(shared, Range(0, 4), Range(4, 8));
  EXPECT_EQ(std::vector<int>(b.assigned.begin(), b.assigned.begin() + 4),
            (std::vector<int>{4, 4, 5, 5}));
  EXPECT_EQ(b.exhausted, (std::vector<int>{4, 5}));
}

TEST(SerialDictatorship, OrderAndCopyErrors) {
  const auto ord = AgentsOverItems({{0, 1}, {1, 0}});
  const auto a = SerialDictatorship(ord, {0, 1}, {2, 3}, {1, 0});
  EXPECT_EQ(a.order, (std::vector<int>{1, 0}));
  EXPECT_THROW(SerialDictatorship(ord, {0, 1}, {2, 3}, {0, 0}), ParameterError);
  // Five agents, three copies of a single alternative.
  std::vector<std::vector<int>> r(6);
  for (int i = 0; i < 5; ++i) r[i] = {5};
  EXPECT_THROW(SerialDictatorship(OrdinalProfile(r, 6), Range(0, 5), {5}),
               InfeasibleCopiesError);
}

TEST(VerifySra, Examples) {
  const auto mixed = AgentsOverItems({{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}, {1, 0, 2, 3}});
  const auto a = SerialDictatorship(mixed, Range(0, 4), Range(4, 8));
  const auto v = VerifySra(a, mixed, Range(0, 4), Range(4, 8), 1);
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(v.max_improving, 1);
  EXPECT_EQ(v.bound, 2);
  EXPECT_EQ(v.witness, (std::vector<std::pair<int, int>>{{2, 4}}));

  // Everyone gets their own top: nothing improves.
  const auto tops = AgentsOverItems({{0, 1}, {1, 0}});
  SRAssignment own;
  own.copies = 2;
  own.assigned = {2, 3, -1, -1};
  const auto w = VerifySra(own, tops, {0, 1}, {2, 3}, 1);
  EXPECT_TRUE(w.ok);
  EXPECT_EQ(w.max_improving, 0);
}

TEST(VerifySra, LastRankedAssignmentFailsWithWitness) {
  const auto shared = AgentsOverItems({{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}});
  SRAssignment last;
  last.copies = 2;
  last.assigned = {7, 7, 7, 7, -1, -1, -1, -1};
  const auto v = VerifySra(last, shared, Range(0, 4), Range(4, 8), 1);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.max_improving, 3);
  ASSERT_EQ(v.witness.size(), 3u);
  std::vector<int> used;
  for (auto [i, j] : v.witness) {
    EXPECT_LT(shared.position(i, j), shared.position(i, 7));
    used.push_back(j);
  }
  std::sort(used.begin(), used.end());
  EXPECT_EQ(std::unique(used.begin(), used.end()), used.end());
}

TEST(VerifySra, FlowMatchesBruteForce) {
  Rng rng(17);
  for (int t = 0; t < 150; ++t) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(5));
    const int k = 1 + static_cast<int>(rng.UniformIndex(2));
    std::vector<std::vector<int>> items(n);
    for (auto& r : items) r = rng.Permutation(n);
    const auto ord = AgentsOverItems(items);
    SRAssignment a;
    a.copies = ceil_sqrt(n);
    a.assigned.assign(2 * n, -1);
    for (int i = 0; i < n; ++i) a.assigned[i] = n + static_cast<int>(rng.UniformIndex(n));
    std::vector<std::vector<char>> allowed(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
      const int own = a.assigned[i] - n;
      for (int j = 0; j < n; ++j) {
        const auto& r = items[i];
        const auto pj = std::find(r.begin(), r.end(), j) - r.begin();
        const auto po = std::find(r.begin(), r.end(), own) - r.begin();
        allowed[i][j] = pj < po;
      }
    }
    const auto v = VerifySra(a, ord, Range(0, n), Range(n, 2 * n), k);
    EXPECT_EQ(v.max_improving, oracle::MaxCoveredLeft(allowed, k));
    std::vector<int> load(2 * n, 0);
    for (auto [i, j] : v.witness) {
      EXPECT_TRUE(allowed[i][j - n]);
      EXPECT_LE(++load[j], k);
    }
  }
}

TEST(VerifySra, SerialDictatorshipOutputPasses) {
  Rng rng(23);
  for (int n : {4, 9, 25, 36}) {
    for (int t = 0; t < 30; ++t) {
      std::vector<std::vector<int>> items(n);
      for (auto& r : items) r = rng.Permutation(n);
      const auto ord = AgentsOverItems(items);
      const auto a = SerialDictatorship(ord, Range(0, n), Range(n, 2 * n));
      for (int k = 1; k <= 3; ++k) {
        EXPECT_TRUE(VerifySra(a, ord, Range(0, n), Range(n, 2 * n), k).ok);
      }
      EXPECT_LE(static_cast<int>(a.exhausted.size()), ceil_sqrt(n));
    }
  }
}

// Independent count of agents strictly preferring j to their best in B.
std::vector<int> Counts(const std::vector<int>& b, const OrdinalProfile& ord) {
  const int m = ord.alternative_count();
  std::vector<int> counts(m, 0);
  for (int i = 0; i < ord.agent_count(); ++i) {
    int best = m;
    for (int j : b) best = std::min(best, ord.position(i, j));
    for (int j = 0; j < m; ++j)
      if (ord.position(i, j) < best) ++counts[j];
  }
  return counts;
}

bool Representative(const std::vector<int>& b, const OrdinalProfile& ord) {
  const int bound = ceil_sqrt(ord.alternative_count());
  if (b.empty() || static_cast<int>(b.size()) > bound) return false;
  const auto c = Counts(b, ord);
  return *std::max_element(c.begin(), c.end()) <= bound;
}

TEST(Srs, Examples) {
  // Agents' tops are alternatives 0 (w) and 1 (x).
  const OrdinalProfile two({{0, 2, 3, 1}, {1, 3, 2, 0}}, 4);
  const auto tc = FindRepresentativeSet(two, SrsMode::kTopChoices);
  ASSERT_TRUE(tc);
  EXPECT_EQ(tc->members, (std::vector<int>{0, 1}));
  EXPECT_EQ(tc->bound, 2);

  const OrdinalProfile one({{3, 0, 2, 1, 4}}, 5);
  for (SrsMode mode : {SrsMode::kExact, SrsMode::kGreedy, SrsMode::kTopChoices}) {
    const auto s = FindRepresentativeSet(one, mode);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->members, (std::vector<int>{3}));
  }

  EXPECT_TRUE(VerifyRepresentativeSet({0}, OrdinalProfile({{0}}, 1)).ok);
  const auto v = VerifyRepresentativeSet({0, 1}, two);
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(v.counts, (std::vector<int>{0, 0, 0, 0}));
  EXPECT_FALSE(VerifyRepresentativeSet({}, two).ok);
  EXPECT_THROW(VerifyRepresentativeSet({9}, two), InvalidAlternativeError);
  EXPECT_THROW(FindRepresentativeSet(OrdinalProfile({{}}, kExactSrsLimit + 1), SrsMode::kExact),
               SizeLimitError);
}

TEST(Srs, EveryOrderingTwiceHasNoRepresentativeSet) {
  const Instance inst = GenSrsImpossible(3, 2);
  EXPECT_EQ(inst.n(), 12);
  const OrdinalProfile ord = DeriveOrdinal(inst);
  EXPECT_FALSE(FindRepresentativeSet(ord, SrsMode::kExact).has_value());
  for (int j = 0; j < 3; ++j) {
    const auto v = VerifyRepresentativeSet({j}, ord);
    EXPECT_FALSE(v.ok);
    // Eight agents do not have j on top; each other alternative beats j
    // for six of them.
    EXPECT_EQ(v.violating_agents, 8);
    EXPECT_EQ(v.worst_count, 6);
  }
}

TEST(Srs, ExactModeMatchesSubsetEnumeration) {
  Rng rng(31);
  for (int t = 0; t < 120; ++t) {
    const int m = 2 + static_cast<int>(rng.UniformIndex(7));
    const int n = 1 + static_cast<int>(rng.UniformIndex(10));
    const OrdinalProfile ord = RandomOrdinal(n, m, rng);
    // Smallest size, then fewest total violations, then lexicographic.
    std::optional<std::vector<int>> expected;
    for (int size = 1; size <= ceil_sqrt(m) && !expected; ++size) {
      std::vector<char> pick(m, 0);
      std::fill(pick.begin(), pick.begin() + size, 1);
      int best_total = 0;
      do {
        std::vector<int> b;
        for (int j = 0; j < m; ++j)
          if (pick[j]) b.push_back(j);
        if (!Representative(b, ord)) continue;
        const auto c = Counts(b, ord);
        const int total = std::accumulate(c.begin(), c.end(), 0);
        if (!expected || total < best_total) {
          expected = b;
          best_total = total;
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    const auto got = FindRepresentativeSet(ord, SrsMode::kExact);
    ASSERT_EQ(got.has_value(), expected.has_value());
    if (got) EXPECT_EQ(got->members, *expected);
    for (SrsMode mode : {SrsMode::kGreedy, SrsMode::kTopChoices}) {
      const auto s = FindRepresentativeSet(ord, mode);
      if (s) EXPECT_TRUE(Representative(s->members, ord));
    }
  }
}

TEST(Srs, VerdictCountsMatchIndependentCount) {
  Rng rng(37);
  for (int t = 0; t < 100; ++t) {
    const int m = 2 + static_cast<int>(rng.UniformIndex(10));
    const OrdinalProfile ord = RandomOrdinal(8, m, rng);
    std::vector<int> b;
    for (int j = 0; j < m; ++j)
      if (rng.Bernoulli(0.3)) b.push_back(j);
    if (b.empty()) b.push_back(0);
    const auto v = VerifyRepresentativeSet(b, ord);
    EXPECT_EQ(v.counts, Counts(b, ord));
    EXPECT_EQ(v.ok, Representative(b, ord));
  }
}

}  // namespace
}  // namespace twoq
