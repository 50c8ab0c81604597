#include <iostream>

#include "vbs/cli.hpp"

int main(int argc, char** argv) {
  return vbs::cli::run(argc, argv, std::cout, std::cerr);
}
