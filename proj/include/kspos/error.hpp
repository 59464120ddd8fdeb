#pragma once

#include <stdexcept>
#include <string>

namespace kspos {

enum class Errc {
  invalid_rank,
  invalid_input,
  dimension_mismatch,
  degenerate_tuple,
  generator_failure,
  precondition,
  malformed_expression,
};

const char* to_string(Errc code) noexcept;

/// Every library failure is reported through this type; `code()` tells input
/// errors (exit 2 at the CLI) apart from internal ones.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace kspos
