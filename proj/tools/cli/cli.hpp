#pragma once

#include <string>
#include <vector>

namespace amo::cli {

// Full command-line entry point. Exit codes: 0 success, 1 validation
// (unknown command/flags, bad config, bad argument values), 2 numeric
// failure (any toolkit error or a failing verify suite).
int run(int argc, char** argv);

// Same, for in-process callers; args excludes the program name.
int run(std::vector<std::string> args);

}  // namespace amo::cli
