#include <iostream>
#include <string>
#include <vector>

#include "localecd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return localecd::cli::run_cli(args, std::cout, std::cerr);
}
