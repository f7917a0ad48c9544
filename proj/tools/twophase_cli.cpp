#include <iostream>

#include "twophase/cli.hpp"

int main(int argc, char** argv) {
  return twophase::cli::run_cli(argc, argv, std::cout, std::cerr);
}
