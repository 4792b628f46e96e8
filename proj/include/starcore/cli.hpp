#pragma once

#include <string>
#include <vector>

namespace starcore {

// Full command-line entry point; args excludes the program name.
// Exit codes: 0 success, 2 configuration error, 3 scale cap exceeded,
// 4 violated invariant or sampling failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace starcore
