#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfm {

enum class Errc {
  invalid_argument,
  out_of_range,
  malformed_csv,
  non_numeric,
  negative_value,
  duplicate_id,
  unknown_id,
  zero_margin,
  empty_input,
  io_failure,
  no_candidates,
};

std::string_view to_string(Errc code);

/// Library error. Every throw site in pfm uses this type with a code that
/// identifies the failure class; callers that need a stage tag wrap it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pfm
