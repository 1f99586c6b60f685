#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace newscomm {

/// Runs the command-line interface. args[0] is the program name.
/// Returns 0 on success, 1 on usage errors and 2 on data errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace newscomm
