#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace greencube::cli {

// Runs one command line (without the program name). Returns the process exit
// code: 0 on success, 2 on validation errors, 1 on I/O or numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace greencube::cli
