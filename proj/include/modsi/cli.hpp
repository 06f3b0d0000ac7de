#pragma once

#include <ostream>

namespace modsi::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,     // configuration, validation or I/O error
  exit_recovery = 2,  // singular correction filter or unfolding failure
};

/// Entry point of `modsi`; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modsi::cli
