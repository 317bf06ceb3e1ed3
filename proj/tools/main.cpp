#include <string>
#include <vector>

#include "halfwave/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return halfwave::cli::dispatch(args);
}
