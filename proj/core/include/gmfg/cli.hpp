#pragma once

#include <string>
#include <vector>

namespace gmfg {

/// Command-line entry point shared by the gmfg tool and the tests.
/// Exit codes: 0 success, 2 invalid configuration, 1 runtime failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace gmfg
