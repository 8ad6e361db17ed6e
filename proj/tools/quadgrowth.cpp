#include <iostream>

#include "quadgrowth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qg::cli::run(args, std::cout, std::cerr);
}
