#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spb::cli {

// Executes one CLI invocation. `args` excludes the program name.
// Writes results to `out` (or to --out <path> when given) and diagnostics
// to `err`. Returns the process exit status: 0 success, 2 usage error,
// 3 numeric/convergence failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Formats a value the way the tables print it: three significant digits,
// scientific (with unpadded exponent, e.g. 6.78e-3) below 0.01.
std::string format_sig3(double x);

// Full-precision round-trippable formatting for non-table output.
std::string format_full(double x);

}  // namespace spb::cli
