#pragma once

#include <stdexcept>
#include <string>

namespace tgl {

enum class ErrorCode {
  malformed_json,
  schema,
  dangling_endpoint,
  duplicate_id,
  unknown_id,
  basis_cap,
  mismatched_sources,
  path_too_long,
  truncation_too_small,
  dimension_mismatch,
  supercritical,
  grid_not_bracketed,
  tie,
  domination,
  sinks_present,
  non_integer_quotient,
  span_cap,
  search_budget,
  invalid_argument,
  postcondition,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tgl
