#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmse::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIoError = 3,
  kBadParameter = 4,
  kImageTooSmall = 5,
  kBadInputFile = 6,
};

/// Runs one subcommand (build-index | simulate | denoise | evaluate).
/// `args[0]` is the program name. Progress goes to `out`; failures print a
/// single diagnostic line to `err` and return a nonzero ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmse::cli
