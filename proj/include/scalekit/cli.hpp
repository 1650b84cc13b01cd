#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scalekit {

enum ExitCode : int {
  kExitOk = 0,
  kExitPropertyFails = 1,
  kExitUsage = 2,
  kExitUncertified = 3,
};

/// Batch front end. `args` excludes the program name. Reports go to `out`
/// (or the file named by --out), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scalekit
