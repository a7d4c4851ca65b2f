#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coverage_miqp::cli {

enum ExitCode : int {
  kOk = 0,
  kInfeasible = 1,
  kInputError = 2,
  kLimit = 3,
};

// args excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Threads for table learning: hardware concurrency, capped by
// COVERAGE_MIQP_THREADS when set to a positive integer.
unsigned learning_threads();

}  // namespace coverage_miqp::cli
