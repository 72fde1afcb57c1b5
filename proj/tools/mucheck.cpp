#include <iostream>
#include <vector>

#include "mucheck/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mucheck::cli::run(std::move(args), std::cout, std::cerr);
}
