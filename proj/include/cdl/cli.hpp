#pragma once

// Batch command-line front end. Exit codes: 0 success, 1 the logic said no
// (proof rejected, countermodel found, formula false, postulate failed),
// 2 usage, parse or input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace cdl::cli {

/// Runs one command. `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdl::cli
