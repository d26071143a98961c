#include <iostream>
#include <string>
#include <vector>

#include "fermopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fermopt::dispatch(args, std::cout, std::cerr);
}
