#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace linopt::cli {

// Exit codes: 0 success (including probability-0 results), 1 internal
// invariant violation, 2 usage or parse error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linopt::cli
