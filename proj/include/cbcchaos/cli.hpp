#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cbcchaos {

/// Exit codes: 0 positive verdict / success, 2 negative verdict, 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

/// Runs one command line (args[0] is the program name). Output goes to `out`
/// unless --out redirects it; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbcchaos
