#pragma once

// Command-line front end. One JSON document on `out` per run; diagnostics on
// `err`. Exit status 0 on a computed result (a refutation is a result), 2 on
// input errors, 1 on internal failures.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kspos::cli {

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  long samples = 500;
  std::string format = "json";  // json | table
  bool conjectural = false;
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kspos::cli
