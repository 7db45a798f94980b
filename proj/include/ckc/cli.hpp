#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ckc::cli {

enum ExitCode : int { kHolds = 0, kDoesNotHold = 1, kUsage = 2, kValidation = 3 };

/// Runs one `ckc` invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ckc::cli
