#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfqsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;  // golden trace or scenario expectation
inline constexpr int kExitInvalid = 2;   // parse, validation or usage error
inline constexpr int kExitRuntime = 3;   // timing diagnostic, event storm, I/O

// Entry point of the sfqsim command; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfqsim
