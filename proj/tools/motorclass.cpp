#include <iostream>

#include "motorclass/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return motorclass::cli::run(args, std::cout, std::cerr);
}
