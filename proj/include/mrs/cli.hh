#pragma once

// Command-line front end: generate, verify, feasible, oracle.

#include <iosfwd>

namespace mrs {

/// Exit codes: 0 ok, 1 infeasible / nonexistent / verify failure, 2 usage,
/// parse, cap or internal error, 3 feasible but not constructed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConstructed = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mrs
