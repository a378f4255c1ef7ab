#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace indet::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kToleranceBreach = 3,
};

/// Runs one subcommand. `args` excludes the program name. The run report (or
/// the CSV selected with --csv) goes to `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace indet::cli
