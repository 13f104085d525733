#include <iostream>

#include "i2e/cli.hpp"

int main(int argc, char** argv) {
  return i2e::cli::main_entry(argc, argv, std::cout, std::cerr);
}
