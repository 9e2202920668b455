#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aasl::cli {

// Exit codes: 0 success / claim true, 2 structurally valid but false claim,
// 1 invalid proof or any error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFalse = 2;

/// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aasl::cli
