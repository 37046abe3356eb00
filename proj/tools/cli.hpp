#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpg::cli {

/// Runs the command line with `args` excluding the program name. Returns the
/// process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpg::cli
