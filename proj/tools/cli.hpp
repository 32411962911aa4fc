#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gbary::cli {

enum ExitCode : int
{
    kOk = 0,
    kUsage = 1,
    kData = 2,
};

/// Runs one subcommand; `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gbary::cli
