#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wigsim::cli {

/// Runs the command line `args` (without the program name).
/// Returns 0 on success, 1 on a runtime failure, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wigsim::cli
