#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quasitile::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

/// Runs the command line `args` (args[0] is the program name). Reports go to `out`
/// unless --out names a file; diagnostics go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quasitile::cli
