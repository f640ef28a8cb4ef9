#pragma once

#include <iosfwd>

namespace qdela {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_io = 3;

/// Entry point of the qdela command-line tool (run, features, compare, plot).
/// Machine-readable lines go to out, diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qdela
