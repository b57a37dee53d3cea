#pragma once

#include <string>
#include <vector>

namespace sigma::cli {

struct Result {
  int exit_code = 0;        // 0 ok, 1 bad input, 2 budget, 3 internal
  std::string text;         // JSON document, newline terminated
  std::string output_path;  // --output, empty for stdout
};

/// Runs one command line (without the program name). Never throws.
Result dispatch(const std::vector<std::string>& args);

}  // namespace sigma::cli
