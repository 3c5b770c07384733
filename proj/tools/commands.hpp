#pragma once

#include <iosfwd>

namespace relstab::cli {

// Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerify = 2;

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace relstab::cli
