#pragma once

#include "mtlcomb/errors.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace mtlcomb::cli {

// 0 success, 2 usage, 3 data, 4 numerical.
int exit_code(ErrorCategory category);

// Runs one subcommand. `args` excludes the program name. Errors are reported
// on `err` as a single "error: <category>: <message>" line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mtlcomb::cli
