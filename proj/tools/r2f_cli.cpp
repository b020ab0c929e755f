#include <string>
#include <vector>

#include "r2f/cli.hpp"

int main(int argc, char** argv) {
  return r2f::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
