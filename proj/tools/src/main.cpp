#include <iostream>
#include <string>
#include <vector>

#include "fieldsens_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fieldsens::cli::run(args, std::cout, std::cerr);
}
