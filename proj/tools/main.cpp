#include <iostream>
#include <string>
#include <vector>

#include "lowmult/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lowmult::run_cli(args, std::cout, std::cerr);
}
