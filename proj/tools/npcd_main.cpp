#include <iostream>

#include "npcd/cli.hpp"

int main(int argc, char** argv) {
  return npcd::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
