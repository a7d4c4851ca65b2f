#include <iostream>
#include <string>
#include <vector>

#include "coverage_miqp/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return coverage_miqp::cli::run(args, std::cout, std::cerr);
}
