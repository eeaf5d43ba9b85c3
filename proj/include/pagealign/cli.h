#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pagealign {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;

// Entry point for the `pagealign` command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pagealign
