#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "twoq/core.h"
#include "twoq/ordinal.h"

namespace twoq {

// Instance JSON:
//   {"kind": s, "k": int?, "n": int, "m": int, "values": [[num]],
//    "side_split": {"n1": [int], "n2": [int]}?}
// Throws ParseError with the matching kind.
Instance ReadInstance(std::string_view text);
// Canonical form: fixed key order, compact, trailing newline.
std::string WriteInstance(const Instance& inst);

// {"edges": [[u, v], ...]}
Subgraph ReadSubgraph(std::string_view text);
std::string WriteSubgraph(const Subgraph& sub);

// {"rankings": [[int], ...]}
OrdinalProfile ReadOrdinal(std::string_view text, int alternative_count);
std::string WriteOrdinal(const OrdinalProfile& ord);

// {"budget": int, "agents": int, "queries": [[agent, alternative, value]]}
// in issue order.
QueryTranscript ReadTranscript(std::string_view text);
std::string WriteTranscript(const QueryTranscript& t);

using Json = nlohmann::ordered_json;

Json InstanceJson(const Instance& inst);
Instance InstanceFromJson(const Json& doc);
Json SubgraphJson(const Subgraph& sub);
Subgraph SubgraphFromJson(const Json& doc);
Json TranscriptJson(const QueryTranscript& t);
QueryTranscript TranscriptFromJson(const Json& doc);

// Compact dump plus newline.
std::string DumpJson(const Json& doc);
// Throws ParseError(kSchema) on malformed text.
Json ParseJson(std::string_view text);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

// Shortest round-trip decimal, "inf" for infinity.
std::string FormatDouble(double x);

}  // namespace twoq
