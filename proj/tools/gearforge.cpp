#include <iostream>

#include "gearforge/cli.hpp"

int main(int argc, char** argv) {
  return gearforge::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
