// mudt -- Modern Uyghur Dependency Treebank toolkit
//
// Distributed under the Apache License, Version 2.0.

#include <iostream>
#include <string>
#include <vector>

#include "mudt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mudt::cli::run(std::move(args), std::cin, std::cout, std::cerr);
}
