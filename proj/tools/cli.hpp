#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bifix {
namespace cli {

/// Runs one CLI invocation. `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`. Exit codes: 0 success, 1 I/O error,
/// 2 validation error, 3 computational error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cli
}  // namespace bifix
