#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nbf::cli {

// Entry point of the `nbf` tool. `args[0]` is the program name. Returns the
// process exit code; diagnostics go to `err`, default outputs to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace nbf::cli
