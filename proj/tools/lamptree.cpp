#include <iostream>
#include <string>
#include <vector>

#include "lamptree/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lamptree::cli::run(args, std::cout, std::cerr);
}
