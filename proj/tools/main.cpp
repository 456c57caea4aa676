#include <iostream>
#include <string>
#include <vector>

#include "flakyfix/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flakyfix::run(args, std::cout, std::cerr);
}
