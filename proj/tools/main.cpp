#include <iostream>
#include <string>
#include <vector>

#include "wattbench/cli/cli.hpp"
#include "wattbench/common/log.hpp"

int main(int argc, char** argv) {
  wattbench::log::init();
  std::vector<std::string> args(argv + 1, argv + argc);
  return wattbench::cli::run_cli(args, std::cout, std::cerr);
}
