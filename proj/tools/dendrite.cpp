#include <iostream>
#include <string>
#include <vector>

#include "dendrite/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dendrite::run_cli(args, std::cout, std::cerr);
}
