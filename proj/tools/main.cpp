#include <iostream>
#include <string>
#include <vector>

#include "mohanet/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return mohanet::run_cli(args, std::cout, std::cerr);
}
