#include "twoq/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "twoq/adversary.h"
#include "twoq/errors.h"
#include "twoq/io.h"
#include "twoq/random.h"
#include "twoq/solvers.h"

namespace twoq {

double GuaranteeFactor(MechanismKind mech, const Instance& inst) {
  switch (mech) {
    case MechanismKind::kMatch2q:
      return 1.0 + 2.0 * ceil_sqrt(inst.n());
    case MechanismKind::kGeneral2q: {
      const double k = FamilySpec::ForInstance(inst).k_eff;
      return 1.0 + 10.0 * k * k * ceil_sqrt(inst.n());
    }
    case MechanismKind::kSc2q:
      return 1.0 + 2.0 * ceil_sqrt(inst.m());
  }
  return 0.0;
}

double OptimalWelfare(const Instance& inst) {
  if (inst.kind() == ProblemKind::kSocialChoice) {
    double best = 0.0;
    for (int j = 0; j < inst.m(); ++j) best = std::max(best, AlternativeWelfare(j, inst.values()));
    return best;
  }
  const auto res = SolveFamily(FamilySpec::ForInstance(inst), inst.graph(), inst.node_values());
  return TotalWeight(res.solution, inst.node_values());
}

double AchievedWelfare(const MechanismRun& run, const Instance& inst) {
  if (run.solution) return TotalWeight(*run.solution, inst.node_values());
  return AlternativeWelfare(run.winner, inst.values());
}

double Distortion(double optimum, double achieved) {
  if (achieved > 0) return optimum / achieved;
  return optimum > 0 ? std::numeric_limits<double>::infinity() : 1.0;
}

std::optional<MechanismRun> RunMechanism(MechanismKind mech, const Instance& inst,
                                         SrsMode mode) {
  switch (mech) {
    case MechanismKind::kMatch2q:
      return MatchTwoQueries(inst);
    case MechanismKind::kGeneral2q:
      return GeneralTwoQueries(inst, FamilySpec::ForInstance(inst));
    case MechanismKind::kSc2q: {
      auto out = ScTwoQueries(inst, mode);
      if (auto* run = std::get_if<MechanismRun>(&out)) return std::move(*run);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void ParallelFor(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (int t = next++; t < count; t = next++) {
        try {
          fn(t);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

DistortionReport DistortionOverSeeds(MechanismKind mech, const GeneratorSpec& gen, int trials,
                                     std::uint64_t seed, int jobs, SrsMode mode) {
  if (trials < 0) throw ParameterError("trials must be >= 0");
  std::vector<std::optional<DistortionRow>> slots(trials);
  ParallelFor(trials, jobs, [&](int t) {
    const std::uint64_t s = MixSeed(seed, static_cast<std::uint64_t>(t));
    Rng rng(s);
    const Instance inst = RandomInstance(gen, rng);
    const auto run = RunMechanism(mech, inst, mode);
    if (!run) return;
    DistortionRow row;
    row.trial = t;
    row.seed = s;
    row.n = inst.n();
    row.m = inst.m();
    row.mechanism = mech;
    row.distortion = Distortion(OptimalWelfare(inst), AchievedWelfare(*run, inst));
    row.bound = GuaranteeFactor(mech, inst);
    row.slack = row.bound - row.distortion;
    slots[t] = row;
  });
  DistortionReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (auto& s : slots) {
    if (!s) {
      ++report.skipped;
      continue;
    }
    report.max_distortion = std::max(report.max_distortion, s->distortion);
    report.min_slack = std::min(report.min_slack, s->slack);
    report.rows.push_back(*s);
  }
  if (report.rows.empty()) report.min_slack = 0.0;
  return report;
}

DistortionRow AdversarialLowerBoundRow(int m, int lambda, std::uint64_t seed) {
  const auto lb = GenLowerBound(m, lambda, seed);
  const SrsMode mode = m <= kExactSrsLimit ? SrsMode::kExact : SrsMode::kGreedy;
  const auto out = ScTwoQueries(lb.instance, mode, lb.ordinal);
  QueryTranscript transcript;
  int winner = 0;
  if (const auto* run = std::get_if<MechanismRun>(&out)) {
    transcript = run->transcript;
    winner = run->winner;
  } else {
    transcript = std::get<SrsNotFound>(out).transcript;
    std::vector<double> welfare(m, 0.0);
    for (const auto& [key, v] : transcript.revealed()) welfare[key.second] += v;
    winner = static_cast<int>(std::max_element(welfare.begin(), welfare.end()) - welfare.begin());
  }
  const auto res = AdversarialCompletionSc(lb.ordinal, transcript, winner);
  DistortionRow row;
  row.seed = seed;
  row.n = m;
  row.m = m;
  row.lambda = lambda;
  row.mechanism = MechanismKind::kSc2q;
  row.distortion = res.ratio;
  row.bound = GuaranteeFactor(MechanismKind::kSc2q, lb.instance);
  row.slack = row.bound - row.distortion;
  return row;
}

std::vector<DistortionRow> AdversarialSweep(const std::vector<int>& ms, int lambda, int trials,
                                            std::uint64_t seed, int jobs) {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  const int per = trials;
  std::vector<DistortionRow> rows(ms.size() * per);
  ParallelFor(static_cast<int>(rows.size()), jobs, [&](int idx) {
    const int m = ms[idx / per];
    const auto s = MixSeed(MixSeed(seed, static_cast<std::uint64_t>(m)), idx % per);
    rows[idx] = AdversarialLowerBoundRow(m, lambda, s);
    rows[idx].trial = idx;
  });
  return rows;
}

double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den <= 0) throw ParameterError("slope needs two or more distinct x values");
  return (n * sxy - sx * sy) / den;
}

std::string CsvHeader() { return "seed,n,m,lambda,mechanism,distortion,bound,slack\n"; }

std::string CsvRow(const DistortionRow& row) {
  return fmt::format("{},{},{},{},{},{},{},{}\n", row.seed, row.n, row.m, row.lambda,
                     MechanismName(row.mechanism), FormatDouble(row.distortion),
                     FormatDouble(row.bound), FormatDouble(row.slack));
}

}  // namespace twoq
