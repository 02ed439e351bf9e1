#pragma once

#include <string>
#include <vector>

namespace sforest {

// Runs the command-line interface on argv-style arguments (program name
// excluded). Returns the process exit code: 0 success, 1 validation error,
// 2 infeasible (no path / no candidate), 3 generation failure.
int cli_run(std::vector<std::string> args);

}  // namespace sforest
