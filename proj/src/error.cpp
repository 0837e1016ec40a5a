#include "pfm/error.hpp"

namespace pfm {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::out_of_range: return "out-of-range";
    case Errc::malformed_csv: return "malformed-csv";
    case Errc::non_numeric: return "non-numeric";
    case Errc::negative_value: return "negative-value";
    case Errc::duplicate_id: return "duplicate-id";
    case Errc::unknown_id: return "unknown-id";
    case Errc::zero_margin: return "zero-margin";
    case Errc::empty_input: return "empty-input";
    case Errc::io_failure: return "io-failure";
    case Errc::no_candidates: return "no-candidates";
  }
  return "unknown";
}

}  // namespace pfm
