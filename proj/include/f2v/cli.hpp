#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace f2v {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitParse = 3,
  kExitInconsistent = 4,
};

// Command-line driver. args excludes the program name.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace f2v
