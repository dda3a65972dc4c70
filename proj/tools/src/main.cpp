#include <iostream>
#include <string>
#include <vector>

#include "serpent/cli/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return serpent::cli::run(args, std::cout, std::cerr);
}
