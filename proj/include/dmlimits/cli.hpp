#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dmlimits {

// Exit codes: 0 success, 1 parse error, 2 precondition violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmlimits
