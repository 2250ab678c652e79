#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twoq/core.h"
#include "twoq/generators.h"
#include "twoq/mechanisms.h"
#include "twoq/sra.h"

namespace twoq {

// Proven distortion factor of each mechanism: 1 + 2*ceil(sqrt(n)) for
// match2q, 1 + 10*k_eff^2*ceil(sqrt(n)) for general2q and
// 1 + 2*ceil(sqrt(m)) for sc2q.
double GuaranteeFactor(MechanismKind mech, const Instance& inst);

// Optimal true welfare: the family optimum for graph kinds, the best
// alternative for social choice.
double OptimalWelfare(const Instance& inst);

// True welfare of the mechanism's output.
double AchievedWelfare(const MechanismRun& run, const Instance& inst);

// optimum / achieved, 1 when both are zero and +inf when only achieved is.
double Distortion(double optimum, double achieved);

// Runs a mechanism on an instance. Social choice without a representative
// set returns nullopt.
std::optional<MechanismRun> RunMechanism(MechanismKind mech, const Instance& inst,
                                         SrsMode mode = SrsMode::kExact);

struct DistortionRow {
  int trial = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  int lambda = 0;
  MechanismKind mechanism = MechanismKind::kMatch2q;
  double distortion = 1.0;
  double bound = 0.0;
  double slack = 0.0;  // bound - distortion
};

struct DistortionReport {
  std::vector<DistortionRow> rows;  // by trial index
  int skipped = 0;                  // social-choice trials without a set
  double max_distortion = 0.0;
  double min_slack = 0.0;
};

// Trial t uses instance seed MixSeed(seed, t). Work is spread over `jobs`
// threads; the result does not depend on it.
DistortionReport DistortionOverSeeds(MechanismKind mech, const GeneratorSpec& gen, int trials,
                                     std::uint64_t seed, int jobs = 1,
                                     SrsMode mode = SrsMode::kExact);

// Adversarial ratio of sc2q on layered lower-bound instances, one row per m.
// The set search is exact up to kExactSrsLimit alternatives and greedy
// beyond. When no set is found the winner is the best revealed top.
DistortionRow AdversarialLowerBoundRow(int m, int lambda, std::uint64_t seed);

// Rows for every m and trial; trial t at m uses instance seed
// MixSeed(MixSeed(seed, m), t). Rows are ordered by m, then trial.
std::vector<DistortionRow> AdversarialSweep(const std::vector<int>& ms, int lambda, int trials,
                                            std::uint64_t seed, int jobs = 1);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y);

std::string CsvHeader();
std::string CsvRow(const DistortionRow& row);

// Runs fn(0..count-1) on `jobs` threads.
void ParallelFor(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace twoq
