#pragma once

// Command-line front end. Exit codes: 0 success, 1 failed validation or a
// computation error, 2 usage error.

#include <ostream>
#include <string>
#include <vector>

namespace dgc::cli {

/// `args` excludes the program name. DGC_TRUNCATION, when set, is the
/// truncation of DGAs whose section does not give one.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dgc::cli
