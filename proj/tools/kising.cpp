#include <iostream>

#include "kising/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kising::cli::main_entry(args, std::cout, std::cerr);
}
