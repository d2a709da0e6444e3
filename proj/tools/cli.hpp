#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sgmr::cli {

// Exit codes.
inline constexpr int ok = 0;
inline constexpr int verify_failed = 1;
inline constexpr int usage_error = 2;
inline constexpr int refused = 3;
inline constexpr int failed = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgmr::cli
