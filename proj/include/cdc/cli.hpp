#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdc::cli {

/// Entry point shared by the binary and the tests. Returns the process
/// exit code: 0 success, 2 infeasible parameters, 3 decode or sort
/// failure, 1 anything else.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cdc::cli
