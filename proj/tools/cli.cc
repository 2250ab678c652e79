#include "cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "twoq/adversary.h"
#include "twoq/errors.h"
#include "twoq/generators.h"
#include "twoq/harness.h"
#include "twoq/io.h"
#include "twoq/mechanisms.h"
#include "twoq/random.h"
#include "twoq/solvers.h"
#include "twoq/sra.h"

namespace twoq::cli {
namespace {

namespace fs = std::filesystem;

Json NumberOrInf(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  return Json(x);
}

Instance LoadInstance(const std::string& path) { return ReadInstance(ReadFile(path)); }

OrdinalProfile LoadOrdinal(const std::string& path, const Instance& inst) {
  if (path.empty()) return DeriveOrdinal(inst);
  return ReadOrdinal(ReadFile(path), inst.graph().alternative_count());
}

void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteFile(path, text);
  }
}

MechanismKind DefaultMechanism(ProblemKind kind) {
  if (kind == ProblemKind::kOneSidedMatching) return MechanismKind::kMatch2q;
  if (kind == ProblemKind::kSocialChoice) return MechanismKind::kSc2q;
  return MechanismKind::kGeneral2q;
}

SrsMode ResolveSrsMode(const std::string& name, int m) {
  if (name.empty() || name == "auto") return m <= kExactSrsLimit ? SrsMode::kExact : SrsMode::kGreedy;
  return ParseSrsMode(name);
}

Json RunJson(const MechanismRun& run, const Instance& inst) {
  Json doc;
  doc["mechanism"] = MechanismName(run.mechanism);
  doc["kind"] = KindName(inst.kind());
  if (run.solution) {
    doc["solution"] = SubgraphJson(*run.solution)["edges"];
  } else {
    doc["winner"] = run.winner;
  }
  doc["revealed_objective"] = run.revealed_objective;
  const double achieved = AchievedWelfare(run, inst);
  const double optimum = OptimalWelfare(inst);
  doc["welfare"] = achieved;
  doc["optimum"] = optimum;
  doc["distortion"] = NumberOrInf(Distortion(optimum, achieved));
  doc["bound"] = GuaranteeFactor(run.mechanism, inst);
  if (run.sra) {
    Json sra;
    sra["copies"] = run.sra->copies;
    sra["assigned"] = run.sra->assigned;
    sra["exhausted"] = run.sra->exhausted;
    doc["sra"] = std::move(sra);
  }
  if (run.srs) {
    Json srs;
    srs["members"] = run.srs->members;
    srs["bound"] = run.srs->bound;
    doc["srs"] = std::move(srs);
  }
  doc["transcript"] = TranscriptJson(run.transcript);
  return doc;
}

std::variant<MechanismRun, SrsNotFound> Execute(MechanismKind mech, const Instance& inst,
                                                const OrdinalProfile& ord, SrsMode mode) {
  switch (mech) {
    case MechanismKind::kMatch2q:
      return MatchTwoQueries(inst, ord);
    case MechanismKind::kGeneral2q:
      return GeneralTwoQueries(inst, FamilySpec::ForInstance(inst), ord);
    case MechanismKind::kSc2q:
      return ScTwoQueries(inst, mode, ord);
  }
  throw ParameterError("unknown mechanism");
}

void WriteCsv(const std::string& path, const std::vector<DistortionRow>& rows, std::ostream& out) {
  std::string text = CsvHeader();
  for (const auto& r : rows) text += CsvRow(r);
  Emit(path, text, out);
}

// ---- gen -------------------------------------------------------------

struct GenOptions {
  std::string construction = "random";
  std::string kind = "one-sided";
  int n = 4;
  int m = 4;
  int k = 1;
  int lambda = 2;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int CmdGen(const GenOptions& o, std::ostream& out) {
  std::vector<std::pair<fs::path, std::string>> files;
  const fs::path dir(o.out_dir);
  if (o.construction == "random") {
    GeneratorSpec spec;
    spec.kind = ParseKind(o.kind);
    spec.n = o.n;
    spec.m = spec.kind == ProblemKind::kSocialChoice ? o.m : o.n;
    spec.k = o.k;
    for (int t = 0; t < o.trials; ++t) {
      Rng rng(MixSeed(o.seed, static_cast<std::uint64_t>(t)));
      const Instance inst = RandomInstance(spec, rng);
      const std::string name =
          spec.kind == ProblemKind::kSocialChoice
              ? fmt::format("{}_n{}_m{}_s{}_{:04}.json", KindName(spec.kind), spec.n, spec.m, o.seed, t)
              : fmt::format("{}_n{}_s{}_{:04}.json", KindName(spec.kind), spec.n, o.seed, t);
      files.emplace_back(dir / name, WriteInstance(inst));
    }
  } else if (o.construction == "theorem5") {
    const auto lb = GenLowerBound(o.m, o.lambda, o.seed);
    const std::string stem = fmt::format("theorem5_m{}_l{}_s{}", o.m, o.lambda, o.seed);
    files.emplace_back(dir / (stem + ".json"), WriteInstance(lb.instance));
    files.emplace_back(dir / (stem + ".ordinal.json"), WriteOrdinal(lb.ordinal));
    Json layout;
    layout["lambda"] = lb.layout.lambda;
    layout["m"] = lb.layout.m;
    layout["layer_sizes"] = lb.layout.layer_sizes;
    layout["layers"] = lb.layout.layers;
    layout["position_values"] = lb.layout.position_values;
    Json blocks = Json::array();
    for (const auto& per_alt : lb.layout.blocks) {
      Json level = Json::object();
      for (std::size_t j = 0; j < per_alt.size(); ++j) {
        if (!per_alt[j].empty()) level[std::to_string(j)] = per_alt[j];
      }
      blocks.push_back(std::move(level));
    }
    layout["blocks"] = std::move(blocks);
    files.emplace_back(dir / (stem + ".layout.json"), DumpJson(layout));
  } else if (o.construction == "srs-impossible") {
    const Instance inst = GenSrsImpossible(o.m, o.k);
    files.emplace_back(dir / fmt::format("srs_impossible_m{}_k{}.json", o.m, o.k),
                       WriteInstance(inst));
  } else {
    throw ParameterError(fmt::format("unknown construction '{}'", o.construction));
  }
  for (const auto& [path, text] : files) {
    WriteFile(path, text);
    out << path.string() << "\n";
  }
  return kOk;
}

// ---- solve -----------------------------------------------------------

int CmdSolve(const std::string& instance, const std::string& output, std::ostream& out) {
  const Instance inst = LoadInstance(instance);
  Json doc;
  doc["kind"] = KindName(inst.kind());
  if (inst.kind() == ProblemKind::kSocialChoice) {
    int best = 0;
    for (int j = 1; j < inst.m(); ++j) {
      if (AlternativeWelfare(j, inst.values()) > AlternativeWelfare(best, inst.values())) best = j;
    }
    doc["winner"] = best;
    doc["objective"] = AlternativeWelfare(best, inst.values());
    doc["method"] = "enumeration";
  } else {
    const auto res = SolveFamily(FamilySpec::ForInstance(inst), inst.graph(), inst.node_values());
    doc["edges"] = SubgraphJson(res.solution)["edges"];
    doc["objective"] = TotalWeight(res.solution, inst.node_values());
    doc["method"] = MethodName(res.method);
  }
  Emit(output, DumpJson(doc), out);
  return kOk;
}

// ---- run -------------------------------------------------------------

struct RunOptions {
  std::string instance;
  std::string ordinal;
  std::string mechanism;
  std::string srs_mode;
  std::string output;
  // Sweep mode.
  std::string kind = "one-sided";
  std::vector<int> n;
  int m = 0;
  int k = 1;
  int trials = 100;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string csv;
};

int CmdRun(const RunOptions& o, std::ostream& out) {
  if (!o.instance.empty()) {
    const Instance inst = LoadInstance(o.instance);
    const OrdinalProfile ord = LoadOrdinal(o.ordinal, inst);
    const MechanismKind mech =
        o.mechanism.empty() ? DefaultMechanism(inst.kind()) : ParseMechanism(o.mechanism);
    const auto result = Execute(mech, inst, ord, ResolveSrsMode(o.srs_mode, inst.m()));
    Json doc;
    if (const auto* run = std::get_if<MechanismRun>(&result)) {
      doc = RunJson(*run, inst);
    } else {
      doc["mechanism"] = MechanismName(mech);
      doc["kind"] = KindName(inst.kind());
      doc["srs"] = nullptr;
      doc["transcript"] = TranscriptJson(std::get<SrsNotFound>(result).transcript);
    }
    Emit(o.output, DumpJson(doc), out);
    return kOk;
  }
  if (o.n.empty()) throw ParameterError("run needs --instance or --n");
  GeneratorSpec gen;
  gen.kind = ParseKind(o.kind);
  gen.k = o.k;
  const MechanismKind mech =
      o.mechanism.empty() ? DefaultMechanism(gen.kind) : ParseMechanism(o.mechanism);
  std::vector<DistortionRow> rows;
  for (std::size_t s = 0; s < o.n.size(); ++s) {
    gen.n = o.n[s];
    gen.m = gen.kind == ProblemKind::kSocialChoice ? (o.m > 0 ? o.m : o.n[s]) : o.n[s];
    const auto report = DistortionOverSeeds(mech, gen, o.trials, MixSeed(o.seed, gen.n), o.jobs,
                                            ResolveSrsMode(o.srs_mode, gen.m));
    for (auto r : report.rows) {
      r.trial += static_cast<int>(s) * o.trials;
      rows.push_back(r);
    }
  }
  WriteCsv(o.csv, rows, out);
  return kOk;
}

// ---- sra -------------------------------------------------------------

struct SraOptions {
  std::string instance;
  std::string ordinal;
  int k_eff = 0;
  std::string srs_mode;
  std::string output;
};

int CmdSraAssign(const SraOptions& o, std::ostream& out) {
  const Instance inst = LoadInstance(o.instance);
  if (inst.kind() == ProblemKind::kSocialChoice) {
    throw ParameterError("serial dictatorship needs a graph instance");
  }
  const OrdinalProfile ord = LoadOrdinal(o.ordinal, inst);
  const auto& g = inst.graph();
  const auto a = SerialDictatorship(ord, g.side1(), g.side2());
  Json doc;
  doc["copies"] = a.copies;
  doc["assigned"] = a.assigned;
  doc["exhausted"] = a.exhausted;
  doc["order"] = a.order;
  Emit(o.output, DumpJson(doc), out);
  return kOk;
}

int CmdSraVerify(const SraOptions& o, std::ostream& out) {
  const Instance inst = LoadInstance(o.instance);
  const OrdinalProfile ord = LoadOrdinal(o.ordinal, inst);
  Json doc;
  bool ok = true;
  if (inst.kind() == ProblemKind::kSocialChoice) {
    const auto srs = FindRepresentativeSet(ord, ResolveSrsMode(o.srs_mode, inst.m()));
    doc["found"] = srs.has_value();
    if (srs) {
      const auto v = VerifyRepresentativeSet(srs->members, ord);
      doc["members"] = srs->members;
      doc["bound"] = srs->bound;
      doc["worst_alternative"] = v.worst_alternative;
      doc["worst_count"] = v.worst_count;
      doc["ok"] = v.ok;
      ok = v.ok;
    }
  } else {
    const auto& g = inst.graph();
    const int k_eff = o.k_eff > 0 ? o.k_eff : FamilySpec::ForInstance(inst).k_eff;
    const auto a = SerialDictatorship(ord, g.side1(), g.side2());
    const auto v = VerifySra(a, ord, g.side1(), g.side2(), k_eff);
    const bool exhausted_ok =
        static_cast<int>(a.exhausted.size()) <= ceil_sqrt(static_cast<int>(g.side1().size()));
    doc["k_eff"] = k_eff;
    doc["copies"] = a.copies;
    doc["copy_condition"] = v.copy_condition;
    doc["max_improving"] = v.max_improving;
    doc["bound"] = v.bound;
    doc["exhausted"] = a.exhausted.size();
    doc["ok"] = v.ok && exhausted_ok;
    ok = v.ok && exhausted_ok;
  }
  Emit(o.output, DumpJson(doc), out);
  return ok ? kOk : kVerification;
}

// ---- adversary -------------------------------------------------------

struct AdversaryOptions {
  std::string instance;
  std::string transcript;
  std::string ordinal;
  std::string run;
  std::string solution;
  int winner = -1;
  std::string output;
  // Sweep mode.
  std::string construction;
  std::vector<int> m;
  int lambda = 2;
  int trials = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string csv;
};

int CmdAdversary(const AdversaryOptions& o, std::ostream& out) {
  if (!o.construction.empty()) {
    if (o.construction != "theorem5") {
      throw ParameterError(fmt::format("unknown construction '{}'", o.construction));
    }
    if (o.m.empty()) throw ParameterError("adversary sweep needs --m");
    WriteCsv(o.csv, AdversarialSweep(o.m, o.lambda, o.trials, o.seed, o.jobs), out);
    return kOk;
  }
  if (o.instance.empty() || (o.transcript.empty() && o.run.empty())) {
    throw ParameterError("adversary needs --instance with --transcript or --run, or --construction");
  }
  const Instance inst = LoadInstance(o.instance);
  const OrdinalProfile ord = LoadOrdinal(o.ordinal, inst);
  std::optional<Json> run_doc;
  if (!o.run.empty()) run_doc = ParseJson(ReadFile(o.run));
  QueryTranscript t;
  if (!o.transcript.empty()) {
    t = ReadTranscript(ReadFile(o.transcript));
  } else if (run_doc->contains("transcript")) {
    t = TranscriptFromJson((*run_doc)["transcript"]);
  } else {
    throw ParameterError("run file has no transcript");
  }
  Json doc;
  CompletionResult res;
  if (inst.kind() == ProblemKind::kSocialChoice) {
    int y = o.winner;
    if (y < 0 && run_doc && run_doc->contains("winner")) y = (*run_doc)["winner"].get<int>();
    if (y < 0) {
      // The mechanism's rule: best revealed welfare, ties to the smaller index.
      std::vector<double> w(inst.m(), 0.0);
      for (const auto& [key, v] : t.revealed()) w[key.second] += v;
      y = static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin());
    }
    res = AdversarialCompletionSc(ord, t, y);
    doc["winner"] = y;
    doc["rival"] = res.rival_alternative;
  } else {
    const FamilySpec spec = FamilySpec::ForInstance(inst);
    Subgraph y;
    if (!o.solution.empty()) {
      y = ReadSubgraph(ReadFile(o.solution));
    } else if (run_doc && run_doc->contains("solution")) {
      Json edges;
      edges["edges"] = (*run_doc)["solution"];
      y = SubgraphFromJson(edges);
    } else {
      const auto& g = inst.graph();
      y = SolveFamily(spec, g, RevealedValues(t, g.agent_count(), g.alternative_count())).solution;
    }
    res = AdversarialCompletionGraph(inst.graph(), spec, ord, t, y);
    doc["solution"] = SubgraphJson(y)["edges"];
    doc["rival"] = SubgraphJson(*res.rival_solution)["edges"];
  }
  doc["ratio"] = NumberOrInf(res.ratio);
  doc["infinite"] = res.infinite;
  doc["iterations"] = res.iterations;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < res.values.rows(); ++i) {
    rows.emplace_back(res.values.row(i).begin(), res.values.row(i).end());
  }
  doc["values"] = rows;
  Emit(o.output, DumpJson(doc), out);
  return kOk;
}

// ---- verify ----------------------------------------------------------

struct VerifyOptions {
  std::vector<std::string> instances;
  std::vector<std::string> csv;
  std::string srs_mode;
};

// Checks one instance; returns an empty string on success.
std::string VerifyInstance(const Instance& inst, const std::string& srs_mode, std::string& note) {
  const MechanismKind mech = DefaultMechanism(inst.kind());
  const OrdinalProfile ord = DeriveOrdinal(inst);
  const auto result = Execute(mech, inst, ord, ResolveSrsMode(srs_mode, inst.m()));
  const auto* run = std::get_if<MechanismRun>(&result);
  if (!run) {
    note = "no representative set";
    return {};
  }
  if (run->sra) {
    const auto& g = inst.graph();
    const int k_eff = FamilySpec::ForInstance(inst).k_eff;
    const auto v = VerifySra(*run->sra, ord, g.side1(), g.side2(), k_eff);
    if (!v.ok) return fmt::format("assignment fails ({} improving > {})", v.max_improving, v.bound);
    if (static_cast<int>(run->sra->exhausted.size()) >
        ceil_sqrt(static_cast<int>(g.side1().size()))) {
      return "too many exhausted alternatives";
    }
  }
  if (run->srs && !VerifyRepresentativeSet(run->srs->members, ord).ok) {
    return "representative set fails";
  }
  const double opt = OptimalWelfare(inst);
  const double bound = GuaranteeFactor(mech, inst);
  if (opt > bound * run->revealed_objective * (1 + kWeightTolerance) + kWeightTolerance) {
    return fmt::format("optimum {} exceeds {} x revealed {}", opt, bound, run->revealed_objective);
  }
  note = fmt::format("distortion={} bound={}",
                     FormatDouble(Distortion(opt, AchievedWelfare(*run, inst))),
                     FormatDouble(bound));
  return {};
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double ParseCell(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ParseError(ParseErrorKind::kSchema, fmt::format("bad CSV number '{}'", s));
  }
}

std::vector<DistortionRow> ReadCsv(const std::string& path) {
  std::stringstream ss(ReadFile(path));
  std::string line;
  std::getline(ss, line);
  if (line + "\n" != CsvHeader()) {
    throw ParseError(ParseErrorKind::kSchema, fmt::format("{}: unexpected CSV header", path));
  }
  std::vector<DistortionRow> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto c = SplitCsvLine(line);
    if (c.size() != 8) throw ParseError(ParseErrorKind::kSchema, fmt::format("{}: bad row", path));
    DistortionRow r;
    r.trial = static_cast<int>(rows.size());
    r.seed = std::stoull(c[0]);
    r.n = std::stoi(c[1]);
    r.m = std::stoi(c[2]);
    r.lambda = std::stoi(c[3]);
    r.mechanism = ParseMechanism(c[4]);
    r.distortion = ParseCell(c[5]);
    r.bound = ParseCell(c[6]);
    r.slack = ParseCell(c[7]);
    rows.push_back(r);
  }
  return rows;
}

int CmdVerify(const VerifyOptions& o, std::ostream& out) {
  if (o.instances.empty() && o.csv.empty()) throw ParameterError("nothing to verify");
  int failures = 0;
  for (const auto& path : o.instances) {
    const Instance inst = LoadInstance(path);
    std::string note;
    const std::string problem = VerifyInstance(inst, o.srs_mode, note);
    if (problem.empty()) {
      out << fmt::format("ok {} {}\n", path, note);
    } else {
      ++failures;
      out << fmt::format("FAIL {} {}\n", path, problem);
    }
  }
  // Guarantee rows (lambda 0) must respect their bound.
  for (const auto& path : o.csv) {
    int bad = 0;
    const auto rows = ReadCsv(path);
    for (const auto& r : rows) {
      if (r.lambda == 0 && !(r.distortion <= r.bound)) ++bad;
    }
    failures += bad;
    out << fmt::format("{} {} rows={} over_bound={}\n", bad == 0 ? "ok" : "FAIL", path,
                       rows.size(), bad);
  }
  return failures == 0 ? kOk : kVerification;
}

// ---- report ----------------------------------------------------------

int CmdReport(const std::vector<std::string>& csv, const std::string& output, std::ostream& out) {
  if (csv.empty()) throw ParameterError("report needs --csv");
  struct Group {
    int rows = 0;
    double max_distortion = 0.0;
    double min_slack = std::numeric_limits<double>::infinity();
    double sum_slack = 0.0;
  };
  using Key = std::tuple<std::string, int, int, int>;
  std::map<Key, Group> groups;
  std::map<std::pair<std::string, int>, std::pair<std::vector<double>, std::vector<double>>> sweeps;
  for (const auto& path : csv) {
    for (const auto& r : ReadCsv(path)) {
      auto& g = groups[{std::string(MechanismName(r.mechanism)), r.lambda, r.n, r.m}];
      ++g.rows;
      g.max_distortion = std::max(g.max_distortion, r.distortion);
      g.min_slack = std::min(g.min_slack, r.slack);
      g.sum_slack += r.slack;
      // Lower-bound sweeps: fit over every row.
      if (r.lambda > 0 && std::isfinite(r.distortion) && r.distortion > 0) {
        auto& xy = sweeps[{std::string(MechanismName(r.mechanism)), r.lambda}];
        xy.first.push_back(r.m);
        xy.second.push_back(r.distortion);
      }
    }
  }
  std::string text = "mechanism,lambda,n,m,rows,max_distortion,min_slack,mean_slack\n";
  for (const auto& [key, g] : groups) {
    const auto& [mech, lambda, n, m] = key;
    text += fmt::format("{},{},{},{},{},{},{},{}\n", mech, lambda, n, m, g.rows,
                        FormatDouble(g.max_distortion), FormatDouble(g.min_slack),
                        FormatDouble(g.sum_slack / g.rows));
  }
  Emit(output, text, out);
  for (const auto& [key, xy] : sweeps) {
    if (std::set<double>(xy.first.begin(), xy.first.end()).size() < 2) continue;
    out << fmt::format("slope {} lambda={} points={} log-log={}\n", key.first, key.second,
                       xy.first.size(), FormatDouble(LogLogSlope(xy.first, xy.second)));
  }
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-query mechanisms, exact optimizers and distortion experiments", "twoq"};
  app.set_config("--config", "", "TOML or INI file with option defaults; flags win");
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate instance files");
  gen_cmd->add_option("--construction", gen.construction, "random, theorem5 or srs-impossible")
      ->capture_default_str();
  gen_cmd->add_option("--kind", gen.kind, "Problem kind for random instances")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Agents (nodes)")->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "Alternatives")->capture_default_str();
  gen_cmd->add_option("--k", gen.k, "Family parameter")->capture_default_str();
  gen_cmd->add_option("--lambda", gen.lambda, "Query budget of the layered construction")
      ->capture_default_str();
  gen_cmd->add_option("--trials", gen.trials, "Number of random instances")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();

  std::string solve_instance;
  std::string solve_output;
  auto* solve_cmd = app.add_subcommand("solve", "Exact optimum of an instance");
  solve_cmd->add_option("--instance", solve_instance, "Instance file")->required();
  solve_cmd->add_option("--output", solve_output, "Output file (default stdout)");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a mechanism on a file or a random sweep");
  run_cmd->add_option("--instance", run.instance, "Instance file");
  run_cmd->add_option("--ordinal", run.ordinal, "Explicit ordinal profile file");
  run_cmd->add_option("--mechanism", run.mechanism, "match2q, general2q or sc2q");
  run_cmd->add_option("--srs-mode", run.srs_mode, "exact, greedy, top-choices or auto");
  run_cmd->add_option("--output", run.output, "Run JSON output (default stdout)");
  run_cmd->add_option("--kind", run.kind, "Sweep: problem kind")->capture_default_str();
  run_cmd->add_option("--n", run.n, "Sweep: sizes")->delimiter(',');
  run_cmd->add_option("--m", run.m, "Sweep: alternatives for social choice (default n)");
  run_cmd->add_option("--k", run.k, "Sweep: family parameter")->capture_default_str();
  run_cmd->add_option("--trials", run.trials, "Sweep: trials per size")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Sweep: seed")->capture_default_str();
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")->capture_default_str();
  run_cmd->add_option("--csv", run.csv, "Sweep: CSV output (default stdout)");

  SraOptions sra;
  auto* sra_cmd = app.add_subcommand("sra", "Serial dictatorship and representative sets");
  sra_cmd->require_subcommand(1);
  auto add_sra_options = [&](CLI::App* c) {
    c->add_option("--instance", sra.instance, "Instance file")->required();
    c->add_option("--ordinal", sra.ordinal, "Explicit ordinal profile file");
    c->add_option("--output", sra.output, "Output file (default stdout)");
  };
  auto* sra_assign = sra_cmd->add_subcommand("assign", "Print the serial-dictatorship assignment");
  add_sra_options(sra_assign);
  auto* sra_verify = sra_cmd->add_subcommand("verify", "Check the assignment or representative set");
  add_sra_options(sra_verify);
  sra_verify->add_option("--k-eff", sra.k_eff, "Degree bound (default from the instance)");
  sra_verify->add_option("--srs-mode", sra.srs_mode, "exact, greedy, top-choices or auto");

  AdversaryOptions adv;
  auto* adv_cmd = app.add_subcommand("adversary", "Worst consistent completion of a transcript");
  adv_cmd->add_option("--instance", adv.instance, "Instance file");
  adv_cmd->add_option("--transcript", adv.transcript, "Transcript file (default: from --run)");
  adv_cmd->add_option("--ordinal", adv.ordinal, "Explicit ordinal profile file");
  adv_cmd->add_option("--run", adv.run, "Run JSON holding the mechanism output");
  adv_cmd->add_option("--solution", adv.solution, "Mechanism solution file");
  adv_cmd->add_option("--winner", adv.winner, "Mechanism winner");
  adv_cmd->add_option("--output", adv.output, "Report output (default stdout)");
  adv_cmd->add_option("--construction", adv.construction, "Sweep: theorem5");
  adv_cmd->add_option("--m", adv.m, "Sweep: alternative counts")->delimiter(',');
  adv_cmd->add_option("--lambda", adv.lambda, "Sweep: query budget")->capture_default_str();
  adv_cmd->add_option("--trials", adv.trials, "Sweep: instances per m")->capture_default_str();
  adv_cmd->add_option("--seed", adv.seed, "Sweep: seed")->capture_default_str();
  adv_cmd->add_option("--jobs", adv.jobs, "Worker threads")->capture_default_str();
  adv_cmd->add_option("--csv", adv.csv, "Sweep: CSV output (default stdout)");

  VerifyOptions ver;
  auto* ver_cmd = app.add_subcommand("verify", "Check guarantees on instances or CSV rows");
  ver_cmd->add_option("--instance,instances", ver.instances, "Instance files");
  ver_cmd->add_option("--csv", ver.csv, "Distortion CSV files");
  ver_cmd->add_option("--srs-mode", ver.srs_mode, "exact, greedy, top-choices or auto");

  std::vector<std::string> report_csv;
  std::string report_output;
  auto* rep_cmd = app.add_subcommand("report", "Aggregate distortion CSV files");
  rep_cmd->add_option("--csv", report_csv, "Input CSV files")->required();
  rep_cmd->add_option("--output", report_output, "Summary CSV (default stdout)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParameter;
  }

  try {
    if (*gen_cmd) return CmdGen(gen, out);
    if (*solve_cmd) return CmdSolve(solve_instance, solve_output, out);
    if (*run_cmd) return CmdRun(run, out);
    if (*sra_assign) return CmdSraAssign(sra, out);
    if (*sra_verify) return CmdSraVerify(sra, out);
    if (*adv_cmd) return CmdAdversary(adv, out);
    if (*ver_cmd) return CmdVerify(ver, out);
    if (*rep_cmd) return CmdReport(report_csv, report_output, out);
  } catch (const SizeLimitError& e) {
    err << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kParameter;
}

}  // namespace twoq::cli
