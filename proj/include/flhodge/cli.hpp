#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace flh::cli {

enum ExitCode : int { Success = 0, Negative = 1, UsageError = 2, PrecisionError = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flh::cli
