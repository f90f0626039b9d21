#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coarrest {

// Exit codes: 0 success, 1 analysis infeasible, 2 input or schema error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coarrest
