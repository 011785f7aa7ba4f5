#include <iostream>
#include <string>
#include <vector>

#include "lab_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return burgers::cli::main_entry(args, std::cout, std::cerr);
}
