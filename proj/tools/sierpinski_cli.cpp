#include <iostream>
#include <variant>

#include "sierpinski/cli.hpp"

int main(int argc, char **argv) {
  auto parsed = sierpinski::cli::parse(argc, argv);
  if (const int *code = std::get_if<int>(&parsed))
    return *code;
  return sierpinski::cli::run(std::get<sierpinski::cli::RunConfig>(parsed));
}
