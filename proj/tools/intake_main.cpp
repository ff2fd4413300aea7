#include <string>
#include <vector>

#include "intake/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return intake::run_cli(args);
}
