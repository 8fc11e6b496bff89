#pragma once

// Command-line front end: argument parsing, report envelopes, CSV and JSONL
// rendering, and the mapping from library errors to exit codes.

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace intrinsic::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kOther = 1, kUsage = 2, kBudget = 3, kInvariant = 4 };

enum class Format { Jsonl, Csv };

/// Header, payload rows and summary of one run. Every row carries a
/// "record" key naming its kind.
struct Report {
  std::string command;
  std::string chart;
  Json config = Json::object();
  std::vector<Json> rows;
  Json summary;  // null when absent
};

/// JSONL: envelope line, rows, summary line. CSV: '#' metadata lines, one
/// table over the union of row keys (exact "num/den" columns gain an
/// "<key>_approx" decimal column), then a '#' summary line.
std::string render(const Report& report, Format format);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& value);

/// Runs `intrinsic <args...>` and returns the exit code. Payload goes to
/// `out` (or the --output file), diagnostics and wall-time to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace intrinsic::cli
