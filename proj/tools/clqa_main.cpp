#include <iostream>
#include <string>
#include <vector>

#include "clqa/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return clqa::cli::run(args, std::cout, std::cerr);
}
