#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glearn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitRuntime = 3,
  kExitInvariant = 4,
};

/// Runs the `glearn` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glearn::cli
