#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sigma/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto result = sigma::cli::dispatch(args);
  if (result.output_path.empty()) {
    std::cout << result.text;
  } else {
    std::ofstream out(result.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << result.output_path << "\n";
      return 1;
    }
    out << result.text;
  }
  return result.exit_code;
}
