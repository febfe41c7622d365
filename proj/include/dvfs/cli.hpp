#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dvfs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitInvalidInput = 3;

/// Runs one `dvfs_plan` invocation; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dvfs::cli
