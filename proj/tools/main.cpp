#include <iostream>

#include "sfqsim/cli.hpp"

int main(int argc, char** argv) {
  return sfqsim::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
