#include <iostream>

#include "torsionshape/cli.hpp"

int main(int argc, char** argv) {
  return tshape::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
