#include <iostream>
#include <string>
#include <vector>

#include "shadowse/driver/driver.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return shadowse::driver::run_cli(args, std::cout, std::cerr);
}
