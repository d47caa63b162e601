#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twoseq::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kConstraint = 3, kIo = 4 };

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twoseq::cli
