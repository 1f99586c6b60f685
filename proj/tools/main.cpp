#include <iostream>
#include <string>
#include <vector>

#include "newscomm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return newscomm::run_cli(args, std::cout, std::cerr);
}
