#pragma once

#include <iosfwd>

namespace nocmap::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kValidation = 3,
  kOracleFailure = 4,
};

/// Parses argv and runs one subcommand (generate, run, compare, verify).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nocmap::cli
