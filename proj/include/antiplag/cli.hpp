#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace antiplag::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDocumentError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAlert = 3;

/// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

}  // namespace antiplag::cli
