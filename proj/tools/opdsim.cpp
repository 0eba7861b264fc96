#include <iostream>

#include "opdsim/cli.hpp"

int main(int argc, char** argv) {
  return opdsim::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
