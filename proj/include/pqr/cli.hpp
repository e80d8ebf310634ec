#pragma once

#include <string>
#include <vector>

namespace pqr {

/// Entry point for the pqr binary. Returns the process exit code:
/// 0 success, 1 usage error, 2 data error, 3 internal error.
int run_cli(std::vector<std::string> args);

}  // namespace pqr
