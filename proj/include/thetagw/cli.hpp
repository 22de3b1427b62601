#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace thetagw {

struct CheckResult {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

/// Everything one invocation produced. wall_time_s is kept for callers but
/// never written by emit_report, so reports are byte-stable.
struct RunReport {
  std::string command;
  nlohmann::ordered_json params;   // null when the command takes none
  nlohmann::ordered_json outputs;  // object
  std::vector<std::string> table_header;
  std::vector<std::vector<std::string>> table_rows;
  std::vector<CheckResult> checks;
  std::optional<std::uint64_t> seed;
  double wall_time_s = 0.0;

  [[nodiscard]] bool all_pass() const;
};

/// CSV-safe float text with 17 significant digits; "inf" / "-inf" / "nan".
[[nodiscard]] std::string format_double(double v);

void emit_report(const RunReport& r, std::string_view format, std::ostream& out);

/// Runs one subcommand. args excludes the program name. Returns the process
/// exit status: 0 ok, 2 usage, 3 domain, 4 numeric or truncation, 5 failed check.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thetagw
