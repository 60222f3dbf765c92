#include <iostream>
#include <string>
#include <vector>

#include "more/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return more::cli::run(args, std::cout, std::cerr);
}
