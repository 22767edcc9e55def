#pragma once

#include <iosfwd>

namespace ufdn::cli {

enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsage = 2,
    kNumeric = 3,
};

// Entry point of the `ufdn` tool. Artifacts go to files or `out`, reports and
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ufdn::cli
