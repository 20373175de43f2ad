#include <iostream>
#include <string>
#include <vector>

#include "deltaprime/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return deltaprime::run(args, std::cout, std::cerr);
}
