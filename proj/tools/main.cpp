#include <iostream>

#include "greencube/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return greencube::cli::run(args, std::cout, std::cerr);
}
