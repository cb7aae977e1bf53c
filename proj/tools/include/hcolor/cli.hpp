#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcolor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one subcommand. args excludes the program name.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int execute(int argc, const char* const* argv);

}  // namespace hcolor::cli
