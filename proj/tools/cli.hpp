#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphss::cli {

inline constexpr int kFormatVersion = 1;

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kInternalError = 2,
};

/// Environment variable overriding the worker thread count.
inline constexpr const char* kThreadsEnv = "GRAPHSS_THREADS";

/// Runs one command line (args excludes the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphss::cli
