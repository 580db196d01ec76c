#include <string>
#include <vector>

#include "metaland/service/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return metaland::run_cli(std::move(args));
}
