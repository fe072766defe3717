#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trgsvd {

/// Exit codes of the command-line driver.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitNotConverged = 3,
    kExitNotRegular = 4,
    kExitIo = 5,
    kExitError = 6,
};

/// Runs the driver; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trgsvd
