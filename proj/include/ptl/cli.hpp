#pragma once

#include <iosfwd>
#include <string_view>

namespace ptl::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitValidation = 2;

// Entry point of the `ptl` tool. Tables and JSON go to `out`, diagnostics to
// `err`. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptl::cli
