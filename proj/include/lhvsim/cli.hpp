#pragma once

#include <ostream>

namespace lhvsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Subcommands: pair-trace, correlation, chsh, sweep, oracle. Tables go to
// `out` unless --out names a file; diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lhvsim::cli
