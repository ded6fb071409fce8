#pragma once

#include <iosfwd>

namespace sls::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumerical = 4;

// Entry point for the `sls` tool: record | replay | compare | bench.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sls::harness
