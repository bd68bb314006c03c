#pragma once
// Command-line front end. Exit codes: 0 success, 1 verification or decode
// failure, 2 usage error, 3 guard exceeded. Machine-readable results go to
// `out` (JSON, JSON lines or CSV); prose goes to `err`.

#include <iosfwd>
#include <string>
#include <vector>

namespace bpxor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bpxor::cli
