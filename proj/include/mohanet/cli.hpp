#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mohanet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;

/// Entry point of the command-line tool. argv[0] is the program name.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Parses "100d", "2.5h", "30m", "15s" or a bare number of seconds.
double parse_duration(const std::string& text);

}  // namespace mohanet
