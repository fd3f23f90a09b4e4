#include <iostream>
#include <string>
#include <vector>

#include "cho/cli.hpp"

int main(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return cho::cli::run(args, std::cout, std::cerr);
}
