#pragma once

#include <string>
#include <vector>

#include "tgl/error.hpp"

namespace tgl {

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_usage = 2,
  exit_supercritical = 3,
  exit_sinks_present = 4,
  exit_budget = 5,
};

int exit_code_for(ErrorCode code);

struct CommandResult {
  int exit_code = exit_ok;
  /// Text for stdout (empty when the report went to --out).
  std::string out;
  /// Diagnostics for stderr.
  std::string err;
};

/// Runs `tgl <args...>` without touching the process streams.
CommandResult run_cli(const std::vector<std::string>& args);

}  // namespace tgl
