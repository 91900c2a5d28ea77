#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dekreg::cli {

/// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

/// Run one command. `args` excludes the program name, e.g.
/// {"fit", "--input", "data.csv", "--method", "nw"}. Primary output goes to
/// the --output file when given (with a <output>.json sidecar), otherwise
/// to `out`. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dekreg::cli
