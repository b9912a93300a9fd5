#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ensys::cli {

/// Exit codes of run().
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kUndetermined = 3;

/// Runs one command; `args` excludes the program name. Reads system or
/// polynomial input from `in` when --stdin is given.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ensys::cli
