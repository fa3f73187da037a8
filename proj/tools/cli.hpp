#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "poplotto/density.hpp"

namespace poplotto::cli {

enum class Command { solve, verify, analyze, dice, rewire, export_graph };
enum class Format { json, csv, dot };

struct RunConfig {
  Command command = Command::solve;
  std::string input;
  std::string output;  // empty: machine output goes to `out`
  double tol = kTolerance;
  Format format = Format::json;
  std::uint64_t seed = 1;
  std::size_t league = 1;  // 1-based, rewire only
};

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kVerificationFailed = 2,
  kNumericalFailure = 3,
};

// Both throw std::invalid_argument on unknown names.
Command parse_command(std::string_view name);
Format parse_format(std::string_view name);

// Reads the input file, dispatches the command and writes the result.
// With an output path the machine-readable result goes to that file and the
// human summary to `out`; without one the result goes to `out` and the
// summary to `log`. Warnings and errors always go to `log`.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace poplotto::cli
