#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace detvar::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInvalidInput = 2,
  kViolation = 3,
};

struct RunConfig {
  std::uint64_t seed = 42;
  int samples = 100;
  double rel_eps = 1e-10;
  int k = 0;
  int trials = 8;
  std::string output_path;
  std::string point_json;
  std::string line_json;
  std::string side = "A";
};

/// Runs `detvar <subcommand> <file> [options]`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace detvar::cli
