#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpball::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Runs one command line (without the program name). Returns 0 on success,
// 1 on validation errors, 2 on runtime or solver errors.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace lpball::cli
