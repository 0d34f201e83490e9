#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kpkit {
namespace cli {

/// Runs one subcommand (solve, check-estimates, kernel-sweep, scaling,
/// report). Returns the process exit code: 0 pass, 1 check failure,
/// 2 usage/config error, 3 numerical divergence.
int run(const std::vector<std::string>& args);

} // namespace cli
} // namespace kpkit
