#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one CLI invocation. `args` excludes the program name. Artifacts without
/// an --out path go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lle::cli
