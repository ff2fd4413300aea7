#pragma once

#include <string>
#include <vector>

namespace intake {

// Runs the command-line interface. Returns 0 on success, 1 on IO/validation
// errors, 2 on usage errors. Never writes partial output files.
int run_cli(const std::vector<std::string>& args);

}  // namespace intake
