#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ionlink::cli {

// Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 invalid
// configuration.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;

// Full command-line front end; `args` excludes the program name.  Writes
// data to `out` and diagnostics to `err`, returns the exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ionlink::cli
