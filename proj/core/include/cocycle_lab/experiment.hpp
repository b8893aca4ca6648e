#pragma once

// Named experiments driven by self-contained JSON configs:
//   {"command": str, "seed": uint, "psi": {...}?, "group": {...}?, "params": {...}}
// Every report is {"tool_version", "seed", "inputs_digest", "config", "results"}.

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace cocycle_lab::experiment {

using Json = nlohmann::json;

std::string tool_version();

// FNV-1a 64 over the canonical dump of the config, as 16 hex digits.
std::string digest(const Json& config);

// Results only; throws cocycle_lab::Error with the failing stage prefixed.
Json results(const Json& config);
// Full report.
Json run(const Json& config);

Json gallery_config(std::uint64_t seed);

struct Replay {
  bool ok = false;
  std::string message;
  Json report;
};
// Accepts a config or a stored report. For a report the digest and the
// recomputed results must match byte for byte.
Replay replay(const Json& document);

// "p,constant" rows of a poincare-style results object; locale independent.
std::string poincare_csv(const Json& results);

// Shortest round-trip decimal form of x.
std::string format_double(double x);

// Canonical report text (two-space indent, trailing newline).
std::string dump(const Json& j);

}  // namespace cocycle_lab::experiment
