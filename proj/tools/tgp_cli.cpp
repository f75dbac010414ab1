#include <iostream>
#include <string>
#include <vector>

#include "tgp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tgp::run_cli(args, std::cout, std::cerr);
}
