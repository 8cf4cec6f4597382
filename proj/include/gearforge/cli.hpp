#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gearforge {

// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitThreshold = 1;  // check: a tolerance was exceeded
inline constexpr int kExitError = 2;      // usage, document or module error

// gearforge <gen|check|solve> --spec FILE [--svg FILE] [--stl FILE]
//           [--report FILE] [--steps N] [--penetration-tol X] [--gap-tol X]
// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gearforge
