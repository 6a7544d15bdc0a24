#include <iostream>

#include "heatex/cli.hpp"

int main(int argc, char** argv) {
  return heatex::run_cli(argc, argv, std::cout, std::cerr);
}
