#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mfix {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitNoConvergence = 4,
  kExitVerifyFailed = 5,
};

enum class LogLevel { Quiet, Info, Trace };

/// MFIX_LOG value; unset means Info. Throws ConfigError on other values.
LogLevel parse_log_level(const char* value);

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out` (or the --out file), diagnostics and log lines to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mfix
