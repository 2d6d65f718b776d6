#pragma once

#include "ake/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ake {

/// Exit codes: 0 ok, 2 usage/config, 3 I/O, 4 numerical, 5 model format.
int exit_code(ErrorKind kind) noexcept;

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ake
