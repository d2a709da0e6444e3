#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  auto args = std::vector<std::string>(argv + 1, argv + argc);
  return sgmr::cli::run(args, std::cout, std::cerr);
}
