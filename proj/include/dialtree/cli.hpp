#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dialtree {

/// Entry point behind the `dialtree` executable. `args` excludes the program
/// name. Diagnostics go to `err`; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace dialtree
