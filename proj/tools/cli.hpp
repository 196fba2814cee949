#pragma once

#include <string>
#include <vector>

namespace sumdyn::cli {

// Exit codes: 0 success, 1 verification failure, 2 budget exhaustion,
// 3 input error.
int run(const std::vector<std::string>& args);

} // namespace sumdyn::cli
