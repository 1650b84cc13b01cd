#include <iostream>

#include "scalekit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return scalekit::run_command(args, std::cout, std::cerr);
}
