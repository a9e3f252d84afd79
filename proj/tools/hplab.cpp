#include <iostream>
#include <string>
#include <vector>

#include "hplab/cli.hpp"

int main(int argc, char** argv) {
  return hplab::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
