#pragma once

#include <iosfwd>

namespace aa::cli {

/// Exit codes: 0 all checks pass, 1 a check failed (report still written),
/// 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace aa::cli
