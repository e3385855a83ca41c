#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return finsler::cli::main_entry(args, std::cout, std::cerr, std::getenv("FINSLER_TOL"));
}
