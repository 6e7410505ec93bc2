#pragma once

// Command-line front end. JSON goes to stdout (or --out), a one-line summary to
// stderr. Exit codes: 0 pass, 1 verification failure, 2 invalid parameters.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace kzmodp::cli {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInvalid = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace kzmodp::cli
