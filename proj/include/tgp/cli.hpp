#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tgp {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFailureRecords = 1,
  kExitConfigError = 2,
  kExitInternalError = 3,
};

/// Runs the `tgp` command line (`args` excludes the program name):
///   tgp <simulate|spectrum|resolvent|sweep|combo|cattaneo-eq|limit>
///       --config FILE [--out PATH] [--seed N] [--threads N] [--plot]
/// Writes the study CSV to PATH (default <study>.csv) and the records to the
/// same stem with extension .jsonl.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tgp
