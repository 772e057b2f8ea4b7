#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lpdisc {

enum ExitCode : int {
  kExitOk = 0,
  kExitChecksFailed = 1,
  kExitValidation = 2,
  kExitResource = 3,
};

/// Runs one CLI invocation. args excludes the program name. Results go to
/// `out` (or the --output file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lpdisc
