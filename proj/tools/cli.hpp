#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace floquet::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kCheckFailure = 2;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace floquet::cli
