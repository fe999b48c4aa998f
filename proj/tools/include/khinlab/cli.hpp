#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace khinlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args excludes the program name). Data goes to out,
/// diagnostics and usage text to err. Returns the process exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace khinlab::cli
