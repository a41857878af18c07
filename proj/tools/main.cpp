#include <iostream>

#include "slicefn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return slicefn::run_cli(args, std::cout, std::cerr);
}
