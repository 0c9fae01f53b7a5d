#pragma once

// Command-line front end. Exit codes: 0 success, 1 I/O failure,
// 2 invalid arguments or parameters, 3 verification failure.

#include <iosfwd>

namespace alphacf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerify = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alphacf
