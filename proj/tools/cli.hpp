#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nbpr::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

/// Entry point for `nbpr <convert|generate|run|bench|verify> ...`.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nbpr::cli
