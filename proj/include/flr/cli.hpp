#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNonConvergence = 3;

// Entry point of the `flr` tool: subcommands gen, fit, bench, denoise.
// Returns the process exit code; never calls std::exit.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flr::cli
