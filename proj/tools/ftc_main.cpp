#include <vector>

#include "ftc/scan.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ftc::cli_main(args);
}
