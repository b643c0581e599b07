#pragma once

#include <ostream>

namespace transteg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kInput = 3,
  kInvariant = 4,
  kIo = 5,
};

/// The `transteg` command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace transteg::cli
