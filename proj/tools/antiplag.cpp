#include <string>
#include <vector>

#include "antiplag/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return antiplag::cli::run(args);
}
