#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hovelkit {

/// Runs one subcommand. Exit codes: 0 pass, 1 check failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace hovelkit
