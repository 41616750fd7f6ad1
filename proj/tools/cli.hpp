#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbfkit::cli {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kInputData = 3,
  kNumerical = 4,
};

// Runs the tool with args (excluding the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbfkit::cli
