#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace abp::cli {

/// Exit codes: 0 success, 2 validation error, 3 numerical non-convergence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace abp::cli
