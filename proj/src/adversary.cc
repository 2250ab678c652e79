#include "twoq/adversary.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "twoq/errors.h"
#include "twoq/random.h"
#include "twoq/solvers.h"

namespace twoq {

std::vector<int> LowerBoundLayerSizes(int m, int lambda) {
  if (lambda < 1) throw ParameterError("lambda must be >= 1");
  if (lambda >= 30 || m <= (1 << lambda)) {
    throw ParameterError(fmt::format("m = {} is too small for lambda = {}", m, lambda));
  }
  std::vector<int> sizes;
  int used = 0;
  for (int l = 1; l <= lambda; ++l) {
    const double x = 0.5 * std::pow(m, static_cast<double>(lambda - l + 1) / lambda);
    sizes.push_back(static_cast<int>(std::ceil(x - 1e-9)));
    used += sizes.back();
  }
  sizes.push_back(2);
  used += 2;
  if (used > m) {
    throw ParameterError(fmt::format("layers need {} alternatives but m = {}", used, m));
  }
  sizes.push_back(m - used);
  return sizes;
}

namespace {

// Splits [0, total) into `parts` contiguous ranges whose sizes differ by
// at most one, larger ranges first.
std::vector<std::pair<int, int>> NearEqualRanges(int total, int parts) {
  std::vector<std::pair<int, int>> out;
  const int base = total / parts;
  const int extra = total % parts;
  int from = 0;
  for (int p = 0; p < parts; ++p) {
    const int len = base + (p < extra ? 1 : 0);
    out.emplace_back(from, from + len);
    from += len;
  }
  return out;
}

}  // namespace

LowerBoundInstance GenLowerBound(int m, int lambda, std::uint64_t seed) {
  LowerBoundLayout lay;
  lay.lambda = lambda;
  lay.m = m;
  lay.layer_sizes = LowerBoundLayerSizes(m, lambda);
  lay.layer_of.assign(m, 0);
  int next = 0;
  for (std::size_t l = 0; l < lay.layer_sizes.size(); ++l) {
    std::vector<int> members;
    for (int t = 0; t < lay.layer_sizes[l]; ++t) {
      members.push_back(next);
      lay.layer_of[next++] = static_cast<int>(l) + 1;
    }
    lay.layers.push_back(std::move(members));
  }
  for (int l = 1; l <= lambda + 1; ++l) {
    lay.position_values.push_back(std::pow(m, -static_cast<double>(l) / lambda));
  }

  // Position 1: contiguous agent blocks. Position l+1: contiguous groups of
  // the position-l blocks.
  std::vector<std::vector<int>> rankings(m);
  std::vector<std::pair<int, int>> blocks = NearEqualRanges(m, lay.layer_sizes[0]);
  for (int l = 1; l <= lambda + 1; ++l) {
    const auto& layer = lay.layers[l - 1];
    if (l > 1) {
      const auto groups =
          NearEqualRanges(static_cast<int>(blocks.size()), static_cast<int>(layer.size()));
      std::vector<std::pair<int, int>> merged;
      for (const auto& [a, b] : groups) merged.emplace_back(blocks[a].first, blocks[b - 1].second);
      blocks = std::move(merged);
    }
    std::vector<std::vector<int>> per_alt(m);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const int alt = layer[b];
      for (int i = blocks[b].first; i < blocks[b].second; ++i) {
        rankings[i].push_back(alt);
        per_alt[alt].push_back(i);
      }
    }
    lay.blocks.push_back(std::move(per_alt));
  }

  Rng rng(seed);
  ValuationProfile values(m, m);
  for (int i = 0; i < m; ++i) {
    std::vector<char> placed(m, 0);
    for (int a : rankings[i]) placed[a] = 1;
    std::vector<int> tail;
    for (int a = 0; a < m; ++a) {
      if (!placed[a]) tail.push_back(a);
    }
    rng.Shuffle(tail);
    rankings[i].insert(rankings[i].end(), tail.begin(), tail.end());
    for (int p = 0; p <= lambda; ++p) values.set(i, rankings[i][p], lay.position_values[p]);
  }
  OrdinalProfile ord(std::move(rankings), m);
  return {Instance::Make(ProblemKind::kSocialChoice, 1, std::move(values)), std::move(ord),
          std::move(lay)};
}

Instance GenSrsImpossible(int m, int k) {
  if (m < 3 || m > 5) throw ParameterError("srs-impossible needs 3 <= m <= 5");
  if (k < 1 || k * k <= m) throw ParameterError("srs-impossible needs k * k > m");
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<double>> rows;
  do {
    std::vector<double> row(m);
    for (int p = 0; p < m; ++p) row[perm[p]] = m - (p + 1);
    for (int c = 0; c < k; ++c) rows.push_back(row);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Instance::Make(ProblemKind::kSocialChoice, 1, ValuationProfile::FromRows(rows));
}

namespace {

// Nonincreasing chain with pinned positions. Free runs between pins form
// segments bounded by the neighbouring pins (below the last pin, by 0).
struct Chain {
  std::vector<double> pin;  // NaN when free
  std::vector<int> seg;     // -1 when pinned
  std::vector<double> lo;
  std::vector<double> hi;

  int size() const { return static_cast<int>(pin.size()); }
  bool pinned(int p) const { return seg[p] == -1; }
  double Lower(int p) const { return pinned(p) ? pin[p] : lo[seg[p]]; }
  double Upper(int p) const { return pinned(p) ? pin[p] : hi[seg[p]]; }
};

constexpr double kFree = std::numeric_limits<double>::quiet_NaN();

Chain MakeChain(std::vector<double> pins) {
  Chain c;
  const int r = static_cast<int>(pins.size());
  if (r > 0 && std::isnan(pins[0])) throw UnboundedError("top of the chain is not pinned");
  double last = std::numeric_limits<double>::infinity();
  c.seg.assign(r, -1);
  for (int p = 0; p < r; ++p) {
    if (!std::isnan(pins[p])) {
      if (pins[p] < 0 || !std::isfinite(pins[p])) {
        throw ParameterError(fmt::format("pin {} at position {} is not a valid value", pins[p], p));
      }
      if (pins[p] > last) {
        throw ParameterError(fmt::format("pin at position {} exceeds an earlier pin", p));
      }
      if (!c.hi.empty() && c.lo.size() < c.hi.size()) c.lo.push_back(pins[p]);
      last = pins[p];
      continue;
    }
    if (!std::isnan(pins[p - 1])) c.hi.push_back(last);
    c.seg[p] = static_cast<int>(c.hi.size()) - 1;
  }
  if (c.lo.size() < c.hi.size()) c.lo.push_back(0.0);
  c.pin = std::move(pins);
  return c;
}

struct Term {
  int pos;
  double coef;
};

// Optimum of sum coef * z over the chain for a sparse coefficient list.
// Sorts `terms` in place.
double SparseValue(const Chain& c, std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.pos < b.pos; });
  double total = 0.0;
  std::size_t t = 0;
  while (t < terms.size()) {
    const int p = terms[t].pos;
    if (c.pinned(p)) {
      total += terms[t].coef * c.pin[p];
      ++t;
      continue;
    }
    const int s = c.seg[p];
    double sum = 0.0;
    double best = 0.0;
    // The threshold falls between positions, so equal positions merge.
    while (t < terms.size() && !c.pinned(terms[t].pos) && c.seg[terms[t].pos] == s) {
      const int q = terms[t].pos;
      while (t < terms.size() && terms[t].pos == q) sum += terms[t++].coef;
      best = std::max(best, sum);
    }
    total += c.lo[s] * sum + (c.hi[s] - c.lo[s]) * best;
  }
  return total;
}

// Dense optimizer; within each segment the first r free positions sit at
// the upper bound and the rest at the lower bound, r maximizing the prefix
// sum (smallest r on ties).
ChainSolution DenseSolve(const Chain& c, const std::vector<double>& coef) {
  ChainSolution out;
  const int r = c.size();
  out.z.assign(r, 0.0);
  int p = 0;
  while (p < r) {
    if (c.pinned(p)) {
      out.z[p] = c.pin[p];
      out.value += coef[p] * c.pin[p];
      ++p;
      continue;
    }
    const int s = c.seg[p];
    int end = p;
    while (end < r && !c.pinned(end) && c.seg[end] == s) ++end;
    double sum = 0.0;
    double best = 0.0;
    int cut = p;
    for (int q = p; q < end; ++q) {
      sum += coef[q];
      if (sum > best) {
        best = sum;
        cut = q + 1;
      }
    }
    for (int q = p; q < end; ++q) out.z[q] = q < cut ? c.hi[s] : c.lo[s];
    out.value += c.lo[s] * sum + (c.hi[s] - c.lo[s]) * best;
    p = end;
  }
  return out;
}

// Chain of one agent: its ranking and the transcript's pins along it.
struct AgentChain {
  int agent = -1;
  const std::vector<int>* ranking = nullptr;
  std::vector<int> pos_of;  // alternative -> position, -1 if unranked
  Chain chain;
};

std::vector<AgentChain> BuildChains(const OrdinalProfile& ord, const QueryTranscript& t,
                                    const std::vector<char>& variable) {
  const int agents = ord.agent_count();
  const int alts = ord.alternative_count();
  if (t.agent_count() != agents) {
    throw DimensionMismatchError(fmt::format("transcript covers {} agents, profile {}",
                                             t.agent_count(), agents));
  }
  std::vector<std::vector<double>> pins(agents);
  for (int i = 0; i < agents; ++i) pins[i].assign(ord.ranking(i).size(), kFree);
  for (const auto& [key, v] : t.revealed()) {
    const auto [i, j] = key;
    if (!variable[i]) {
      throw ParameterError(fmt::format("agent {} is queried but carries no values", i));
    }
    pins[i][ord.position(i, j)] = v;
  }
  std::vector<AgentChain> out(agents);
  for (int i = 0; i < agents; ++i) {
    out[i].agent = i;
    out[i].ranking = &ord.ranking(i);
    if (!variable[i] || ord.ranking(i).empty()) continue;
    out[i].pos_of.assign(alts, -1);
    for (std::size_t p = 0; p < ord.ranking(i).size(); ++p) out[i].pos_of[ord.ranking(i)[p]] = p;
    try {
      out[i].chain = MakeChain(std::move(pins[i]));
    } catch (const UnboundedError&) {
      throw UnboundedError(fmt::format("agent {}'s top value is not revealed", i));
    }
  }
  return out;
}

// Pins every listed alternative of each agent to zero.
std::vector<AgentChain> PinToZero(std::vector<AgentChain> chains,
                                  const std::vector<std::vector<int>>& zero) {
  for (auto& a : chains) {
    if (a.pos_of.empty()) continue;
    auto pins = a.chain.pin;
    for (int j : zero[a.agent]) pins[a.pos_of[j]] = 0.0;
    a.chain = MakeChain(std::move(pins));
  }
  return chains;
}

bool Active(const AgentChain& a) { return !a.pos_of.empty(); }

// Completed row of one agent for coefficients +1 on `plus` and -t on `minus`.
void FillAgent(const AgentChain& a, const std::vector<int>& plus, const std::vector<int>& minus,
               double t, ValuationProfile& out) {
  std::vector<double> coef(a.chain.size(), 0.0);
  for (int j : plus) coef[a.pos_of[j]] += 1.0;
  for (int j : minus) coef[a.pos_of[j]] -= t;
  const auto sol = DenseSolve(a.chain, coef);
  for (int p = 0; p < a.chain.size(); ++p) out.set(a.agent, (*a.ranking)[p], sol.z[p]);
}

double Ratio(double x, double y) {
  if (y > 0) return x / y;
  return x > 0 ? std::numeric_limits<double>::infinity() : 1.0;
}

// Largest t with F(t) > 0 up to relative tolerance, starting from F(0).
double Bisect(const std::function<double(double)>& f, double hi, double tol, int& iterations) {
  double lo = 0.0;
  iterations = 0;
  while (hi - lo > tol * hi) {
    if (++iterations > kBisectionLimit) {
      throw NumericError(fmt::format("bisection did not converge in {} steps", kBisectionLimit));
    }
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

ChainSolution ChainSolve(const std::vector<double>& coef,
                         const std::vector<std::optional<double>>& pins) {
  if (coef.size() != pins.size()) throw DimensionMismatchError("coef and pins differ in length");
  std::vector<double> raw(pins.size(), kFree);
  for (std::size_t p = 0; p < pins.size(); ++p) {
    if (pins[p]) raw[p] = *pins[p];
  }
  return DenseSolve(MakeChain(std::move(raw)), coef);
}

CompletionResult AdversarialCompletionSc(const OrdinalProfile& ord,
                                         const QueryTranscript& transcript, int y,
                                         std::vector<int> rivals, double tolerance) {
  const int n = ord.agent_count();
  const int m = ord.alternative_count();
  if (y < 0 || y >= m) throw InvalidAlternativeError(fmt::format("winner {} out of range", y));
  if (rivals.empty()) {
    rivals.resize(m);
    std::iota(rivals.begin(), rivals.end(), 0);
  }
  for (int x : rivals) {
    if (x < 0 || x >= m) throw InvalidAlternativeError(fmt::format("rival {} out of range", x));
  }
  std::sort(rivals.begin(), rivals.end());
  rivals.erase(std::unique(rivals.begin(), rivals.end()), rivals.end());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(ord.ranking(i).size()) != m) {
      throw ParameterError(fmt::format("agent {} does not rank every alternative", i));
    }
  }
  const std::vector<AgentChain> chains = BuildChains(ord, transcript, std::vector<char>(n, 1));

  double tops = 0.0;
  double min_y = 0.0;
  for (const auto& a : chains) {
    if (!Active(a)) continue;
    tops += a.chain.pin[0];
    min_y += a.chain.Lower(a.pos_of[y]);
  }

  std::vector<Term> scratch;
  auto rival_value = [&](const std::vector<AgentChain>& cs, int x, double t) {
    double total = 0.0;
    for (const auto& a : cs) {
      if (!Active(a)) continue;
      scratch.clear();
      scratch.push_back({a.pos_of[x], 1.0});
      scratch.push_back({a.pos_of[y], -t});
      total += SparseValue(a.chain, scratch);
    }
    return total;
  };
  auto best_rival = [&](const std::vector<AgentChain>& cs, double t) {
    std::pair<double, int> best{-std::numeric_limits<double>::infinity(), -1};
    for (int x : rivals) {
      const double v = rival_value(cs, x, t);
      if (v > best.first) best = {v, x};
    }
    return best;
  };
  auto complete = [&](const std::vector<AgentChain>& cs, int x, double t) {
    ValuationProfile out(n, m);
    for (const auto& a : cs) {
      if (Active(a)) FillAgent(a, {x}, {y}, t, out);
    }
    return out;
  };

  CompletionResult res;
  if (min_y == 0.0) {
    std::vector<std::vector<int>> zero(n, std::vector<int>{y});
    const auto pinned = PinToZero(chains, zero);
    const auto [v, x] = best_rival(pinned, 0.0);
    if (x != -1 && x != y && v > 0) {
      res.values = complete(pinned, x, 0.0);
      res.infinite = true;
      res.ratio = std::numeric_limits<double>::infinity();
      res.rival_alternative = x;
      return res;
    }
  }
  const double hi = (min_y > 0 ? tops / min_y : 0.0) + 1.0;
  const double lo =
      Bisect([&](double t) { return best_rival(chains, t).first; }, hi, tolerance, res.iterations);
  const int x = best_rival(chains, lo).second;
  res.values = complete(chains, x, lo);
  res.rival_alternative = x;
  res.ratio = Ratio(AlternativeWelfare(x, res.values), AlternativeWelfare(y, res.values));
  res.infinite = std::isinf(res.ratio);
  return res;
}

std::vector<Subgraph> EnumerateFamily(const FamilySpec& spec, const GraphModel& graph) {
  if (graph.is_social_choice()) throw ParameterError("social choice has no solution family");
  const int nodes = graph.node_count();
  if (nodes > kRivalEnumerationLimit) {
    throw SizeLimitError(fmt::format("family enumeration is limited to {} nodes",
                                     kRivalEnumerationLimit));
  }
  std::vector<int> cap(nodes, 1);
  for (int v = 0; v < nodes; ++v) {
    switch (spec.kind) {
      case ProblemKind::kKMatching:
        cap[v] = spec.k;
        break;
      case ProblemKind::kKConstrainedAllocation:
        cap[v] = graph.in_side1(v) ? spec.k : 1;
        break;
      case ProblemKind::kCliquePacking:
        cap[v] = spec.k - 1;
        break;
      case ProblemKind::kCyclePacking:
        cap[v] = 2;
        break;
      default:
        break;
    }
  }
  const auto edges = graph.edges();
  std::vector<int> deg(nodes, 0);
  std::vector<Edge> current;
  std::vector<Subgraph> out;
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == edges.size()) {
      Subgraph s(current);
      if (CheckFeasible(s, spec, graph)) out.push_back(std::move(s));
      return;
    }
    rec(t + 1);
    const auto [u, v] = edges[t];
    if (deg[u] < cap[u] && deg[v] < cap[v]) {
      ++deg[u];
      ++deg[v];
      current.push_back({u, v});
      rec(t + 1);
      current.pop_back();
      --deg[u];
      --deg[v];
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(),
            [](const Subgraph& a, const Subgraph& b) { return a.edges() < b.edges(); });
  return out;
}

CompletionResult AdversarialCompletionGraph(const GraphModel& graph, const FamilySpec& spec,
                                            const OrdinalProfile& ord,
                                            const QueryTranscript& transcript,
                                            const Subgraph& y,
                                            const std::vector<Subgraph>* rivals,
                                            double tolerance) {
  if (graph.is_social_choice()) throw ParameterError("use the social-choice completion");
  if (!ord.MatchesGraph(graph)) {
    throw ParameterError("ordinal profile does not rank the graph's relevant sets");
  }
  if (!CheckFeasible(y, spec, graph)) throw ParameterError("mechanism output is infeasible");
  const int nodes = graph.node_count();
  std::vector<char> variable(nodes, 0);
  for (int i = 0; i < nodes; ++i) variable[i] = graph.is_valued(i) ? 1 : 0;
  const std::vector<AgentChain> chains = BuildChains(ord, transcript, variable);
  const auto yadj = y.Adjacency(nodes);

  double tops = 0.0;
  double min_y = 0.0;
  for (const auto& a : chains) {
    if (!Active(a)) continue;
    tops += a.chain.pin[0];
    for (int j : yadj[a.agent]) min_y += a.chain.Lower(a.pos_of[j]);
  }

  // Degree-one families are searched exactly by a matching solve on the
  // per-agent optima; others compete from an explicit list.
  const bool matching_family = spec.k_eff == 1 && spec.kind != ProblemKind::kCliquePacking &&
                               spec.kind != ProblemKind::kCyclePacking;
  std::vector<Subgraph> listed;
  const std::vector<Subgraph>* list = rivals;
  if (rivals) {
    for (const auto& r : *rivals) {
      if (!CheckFeasible(r, spec, graph)) throw ParameterError("rival solution is infeasible");
    }
  } else if (!matching_family) {
    listed = EnumerateFamily(spec, graph);
    list = &listed;
  }
  int kmax = 1;
  if (list) {
    for (const auto& r : *list) {
      const auto d = r.Degrees(nodes);
      for (int v : d) kmax = std::max(kmax, v);
    }
  }

  std::vector<Term> scratch;
  auto agent_value = [&](const AgentChain& a, const std::vector<int>& xs, double t) {
    scratch.clear();
    for (int j : xs) scratch.push_back({a.pos_of[j], 1.0});
    for (int j : yadj[a.agent]) scratch.push_back({a.pos_of[j], -t});
    return SparseValue(a.chain, scratch);
  };
  auto listed_value = [&](const std::vector<AgentChain>& cs, const Subgraph& x, double t) {
    const auto xadj = x.Adjacency(nodes);
    double total = 0.0;
    for (const auto& a : cs) {
      if (Active(a)) total += agent_value(a, xadj[a.agent], t);
    }
    return total;
  };
  // Best rival at t: value and the rival.
  auto best_rival = [&](const std::vector<AgentChain>& cs, double t) -> std::pair<double, Subgraph> {
    if (list) {
      std::pair<double, Subgraph> best{-std::numeric_limits<double>::infinity(), Subgraph()};
      for (const auto& r : *list) {
        const double v = listed_value(cs, r, t);
        if (v > best.first) best = {v, r};
      }
      return best;
    }
    std::vector<double> g(nodes, 0.0);
    double base = 0.0;
    for (const auto& a : cs) {
      if (!Active(a)) continue;
      g[a.agent] = agent_value(a, {}, t);
      base += g[a.agent];
    }
    auto f = [&](int u, int v) {
      const auto& a = cs[u];
      return Active(a) ? agent_value(a, {v}, t) - g[u] : 0.0;
    };
    if (spec.kind == ProblemKind::kOneSidedMatching) {
      const int n = nodes / 2;
      Matrix w(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) w(i, j) = f(i, n + j) + f(n + j, i);
      }
      const auto assign = HungarianAssignment(w);
      double total = base;
      std::vector<Edge> es;
      for (int i = 0; i < n; ++i) {
        total += w(i, assign[i]);
        es.push_back({i, n + assign[i]});
      }
      return {total, Subgraph(std::move(es))};
    }
    std::vector<WeightedEdge> es;
    for (const auto& [u, v] : graph.edges()) es.push_back({u, v, f(u, v) + f(v, u)});
    const auto mate = BlossomMate(nodes, es);
    double total = base;
    std::vector<Edge> chosen;
    for (int u = 0; u < nodes; ++u) {
      if (mate[u] > u) {
        total += f(u, mate[u]) + f(mate[u], u);
        chosen.push_back({u, mate[u]});
      }
    }
    return {total, Subgraph(std::move(chosen))};
  };
  auto complete = [&](const std::vector<AgentChain>& cs, const Subgraph& x, double t) {
    const auto xadj = x.Adjacency(nodes);
    ValuationProfile out(nodes, nodes);
    for (const auto& a : cs) {
      if (Active(a)) FillAgent(a, xadj[a.agent], yadj[a.agent], t, out);
    }
    return out;
  };

  CompletionResult res;
  if (min_y == 0.0) {
    const auto pinned = PinToZero(chains, yadj);
    auto [v, x] = best_rival(pinned, 0.0);
    if (v > 0) {
      res.values = complete(pinned, x, 0.0);
      res.infinite = true;
      res.ratio = std::numeric_limits<double>::infinity();
      res.rival_solution = std::move(x);
      return res;
    }
  }
  const double hi = kmax * ((min_y > 0 ? tops / min_y : 0.0) + 1.0);
  const double lo =
      Bisect([&](double t) { return best_rival(chains, t).first; }, hi, tolerance, res.iterations);
  Subgraph x = best_rival(chains, lo).second;
  res.values = complete(chains, x, lo);
  res.ratio = Ratio(TotalWeight(x, res.values), TotalWeight(y, res.values));
  res.infinite = std::isinf(res.ratio);
  res.rival_solution = std::move(x);
  return res;
}

}  // namespace twoq
