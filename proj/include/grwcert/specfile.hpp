#pragma once

#include <string>

#include "grwcert/chart.hpp"

namespace grwcert {

inline constexpr int kSpecSchemaVersion = 1;

/// Parse a spec document. Throws SchemaError naming the offending field path,
/// e.g. "dimension", "metric.1,0" or "domain.ranges.t".
ChartSpec parse_spec(const std::string& text);

/// Read and parse a spec file; I/O failures throw Error.
ChartSpec load_spec(const std::string& path);

/// Canonical JSON form (sorted keys, two-space indent). parse_spec(spec_to_json(s)) == s.
std::string spec_to_json(const ChartSpec& spec);

}  // namespace grwcert
