#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmaforge::cli {

// Exit codes: 0 every check passed, 1 some check failed, 2 usage or
// configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qmaforge::cli
