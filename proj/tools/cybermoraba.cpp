#include <iostream>

#include "cybermoraba/cli.hpp"

int main(int argc, char** argv) {
  return cybermoraba::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cin, std::cout, std::cerr);
}
