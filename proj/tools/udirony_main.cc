#include <iostream>
#include <string>
#include <vector>

#include "udirony/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return udirony::run_command(args, std::cout, std::cerr);
}
