#include <iostream>

#include "detvar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return detvar::cli::run(args, std::cout, std::cerr);
}
