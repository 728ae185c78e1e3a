#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torusq {

enum ExitCode : int {
  kExitOk = 0,
  kExitDomain = 2,   // invalid physical input (a <= 1, Bose mu >= 0, ...)
  kExitNumeric = 3,  // non-convergence, failed verification, I/O failure
  kExitUsage = 64,   // unknown flag or malformed command line
};

// Runs one subcommand: spectrum | expect | thermo | natcoords | verify | sweep.
// `args` excludes the program name. Data goes to files or `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torusq
