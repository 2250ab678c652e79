#include "twoq/io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "twoq/errors.h"

namespace twoq {

namespace {

[[noreturn]] void Schema(const std::string& what) {
  throw ParseError(ParseErrorKind::kSchema, what);
}

const Json& Require(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) Schema(fmt::format("missing key '{}'", key));
  return *it;
}

int AsInt(const Json& v, const char* what) {
  if (!v.is_number_integer()) Schema(fmt::format("'{}' must be an integer", what));
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    Schema(fmt::format("'{}' out of range", what));
  }
  return static_cast<int>(x);
}

std::vector<int> AsIntList(const Json& v, const char* what) {
  if (!v.is_array()) Schema(fmt::format("'{}' must be an array", what));
  std::vector<int> out;
  for (const auto& x : v) out.push_back(AsInt(x, what));
  return out;
}

void CheckKeys(const Json& doc, std::initializer_list<const char*> allowed) {
  if (!doc.is_object()) Schema("expected a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) Schema(fmt::format("unexpected key '{}'", it.key()));
  }
}

}  // namespace

Json ParseJson(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    Schema(fmt::format("invalid JSON: {}", e.what()));
  }
}

std::string DumpJson(const Json& doc) { return doc.dump() + "\n"; }

Json InstanceJson(const Instance& inst) {
  Json doc;
  doc["kind"] = std::string(KindName(inst.kind()));
  if (KindTakesK(inst.kind())) doc["k"] = inst.k();
  doc["n"] = inst.n();
  doc["m"] = inst.m();
  Json rows = Json::array();
  for (int i = 0; i < inst.n(); ++i) {
    Json row = Json::array();
    for (double v : inst.values().row(i)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  doc["values"] = std::move(rows);
  if (inst.side_split()) {
    Json split;
    split["n1"] = inst.side_split()->n1;
    split["n2"] = inst.side_split()->n2;
    doc["side_split"] = std::move(split);
  }
  return doc;
}

Instance InstanceFromJson(const Json& doc) {
  CheckKeys(doc, {"kind", "k", "n", "m", "values", "side_split"});
  const Json& kind_j = Require(doc, "kind");
  if (!kind_j.is_string()) Schema("'kind' must be a string");
  ProblemKind kind;
  try {
    kind = ParseKind(kind_j.get<std::string>());
  } catch (const ParameterError& e) {
    Schema(e.what());
  }
  int k = 1;
  if (KindTakesK(kind)) {
    k = AsInt(Require(doc, "k"), "k");
  } else if (doc.contains("k")) {
    Schema(fmt::format("'k' is not a parameter of {}", KindName(kind)));
  }
  const int n = AsInt(Require(doc, "n"), "n");
  const int m = AsInt(Require(doc, "m"), "m");
  const Json& vals = Require(doc, "values");
  if (!vals.is_array()) Schema("'values' must be an array of rows");
  if (static_cast<int>(vals.size()) != n) {
    throw ParseError(ParseErrorKind::kDimensionMismatch,
                     fmt::format("'values' has {} rows, n = {}", vals.size(), n));
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const Json& row = vals[i];
    if (!row.is_array()) Schema(fmt::format("values row {} is not an array", i));
    if (static_cast<int>(row.size()) != m) {
      throw ParseError(
          ParseErrorKind::kDimensionMismatch,
          fmt::format("values row {} has length {}, m = {}", i, row.size(), m));
    }
    std::vector<double> r;
    r.reserve(m);
    for (const auto& x : row) {
      if (!x.is_number()) Schema(fmt::format("values row {} holds a non-number", i));
      r.push_back(x.get<double>());
    }
    rows.push_back(std::move(r));
  }
  ValuationProfile values = ValuationProfile::FromRows(rows);
  std::optional<SideSplit> split;
  if (auto it = doc.find("side_split"); it != doc.end()) {
    CheckKeys(*it, {"n1", "n2"});
    split = SideSplit{AsIntList(Require(*it, "n1"), "n1"),
                      AsIntList(Require(*it, "n2"), "n2")};
  }
  try {
    return Instance::Make(kind, k, std::move(values), std::move(split));
  } catch (const ParameterError& e) {
    Schema(e.what());
  }
}

Instance ReadInstance(std::string_view text) {
  return InstanceFromJson(ParseJson(text));
}

std::string WriteInstance(const Instance& inst) {
  return DumpJson(InstanceJson(inst));
}

Json SubgraphJson(const Subgraph& sub) {
  Json edges = Json::array();
  for (const auto& e : sub.edges()) edges.push_back(Json::array({e.u, e.v}));
  Json doc;
  doc["edges"] = std::move(edges);
  return doc;
}

Subgraph SubgraphFromJson(const Json& doc) {
  CheckKeys(doc, {"edges", "weight"});
  const Json& edges = Require(doc, "edges");
  if (!edges.is_array()) Schema("'edges' must be an array");
  std::vector<Edge> out;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2) Schema("each edge must be [u, v]");
    out.push_back({AsInt(e[0], "edge"), AsInt(e[1], "edge")});
  }
  return Subgraph(std::move(out));
}

Subgraph ReadSubgraph(std::string_view text) {
  return SubgraphFromJson(ParseJson(text));
}

std::string WriteSubgraph(const Subgraph& sub) {
  return DumpJson(SubgraphJson(sub));
}

OrdinalProfile ReadOrdinal(std::string_view text, int alternative_count) {
  const Json doc = ParseJson(text);
  CheckKeys(doc, {"rankings"});
  const Json& r = Require(doc, "rankings");
  if (!r.is_array()) Schema("'rankings' must be an array");
  std::vector<std::vector<int>> rankings;
  for (const auto& row : r) rankings.push_back(AsIntList(row, "rankings"));
  try {
    return OrdinalProfile(std::move(rankings), alternative_count);
  } catch (const ParameterError& e) {
    Schema(e.what());
  }
}

std::string WriteOrdinal(const OrdinalProfile& ord) {
  Json doc;
  doc["rankings"] = ord.rankings();
  return DumpJson(doc);
}

Json TranscriptJson(const QueryTranscript& t) {
  Json doc;
  doc["budget"] = t.budget();
  doc["agents"] = t.agent_count();
  Json queries = Json::array();
  for (const auto& q : t.log()) {
    queries.push_back(
        Json::array({q.agent, q.alternative, *t.revealed_value(q.agent, q.alternative)}));
  }
  doc["queries"] = std::move(queries);
  return doc;
}

QueryTranscript TranscriptFromJson(const Json& doc) {
  CheckKeys(doc, {"budget", "agents", "queries"});
  const int budget = AsInt(Require(doc, "budget"), "budget");
  const int agents = AsInt(Require(doc, "agents"), "agents");
  if (budget < 1 || agents < 0) Schema("invalid transcript header");
  QueryTranscript t(agents, budget);
  const Json& qs = Require(doc, "queries");
  if (!qs.is_array()) Schema("'queries' must be an array");
  for (const auto& q : qs) {
    if (!q.is_array() || q.size() != 3 || !q[2].is_number()) {
      Schema("each query must be [agent, alternative, value]");
    }
    const int agent = AsInt(q[0], "agent");
    const int alt = AsInt(q[1], "alternative");
    const double v = q[2].get<double>();
    if (v < 0 || !std::isfinite(v)) {
      throw ParseError(ParseErrorKind::kNegativeValue, "query value must be >= 0");
    }
    if (auto prev = t.revealed_value(agent, alt); prev && *prev != v) {
      Schema(fmt::format("conflicting values for query ({}, {})", agent, alt));
    }
    try {
      t.Record(agent, alt, v);
    } catch (const Error& e) {
      Schema(e.what());
    }
  }
  return t;
}

QueryTranscript ReadTranscript(std::string_view text) {
  return TranscriptFromJson(ParseJson(text));
}

std::string WriteTranscript(const QueryTranscript& t) {
  return DumpJson(TranscriptJson(t));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string FormatDouble(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

}  // namespace twoq
