#pragma once

#include <iosfwd>

namespace hdsine::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

/// Entry point of the `hdsine` tool. Rows go to --output (or `out` for "-"),
/// diagnostics and violation dumps to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hdsine::cli
