#pragma once

#include <iosfwd>

namespace coda::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;

/// Runs the command line. Errors are reported on `err` as a single line
/// "error: <validation|computation|usage>: <message>".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coda::cli
