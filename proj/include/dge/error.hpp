#pragma once

#include <stdexcept>
#include <string>

namespace dge {

// Every failure mode the library reports. Grouped by the layer that
// raises it; the CLI maps ValidationError -> exit 2 and IoError -> exit 1.
enum class errc {
  // data model
  empty_snapshot,
  empty_level,
  dim_mismatch,
  level_mismatch,
  non_finite,
  bad_argument,
  // metrics
  degenerate_draw,
  empty_input,
  too_large,
  insufficient_samples,
  dim_too_large,
  no_common_level,
  missing_bank,
  metric_mismatch,
  // analysis
  length_mismatch,
  not_normalized,
  degenerate_ranks,
  all_zero,
  // file formats
  bad_magic,
  unsupported_version,
  truncated,
  trailing_bytes,
  ragged_rows,
  non_numeric,
  bad_config,
  // filesystem
  io_failure,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Violated invariant or contract precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem or stream failure; the content was never inspected.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dge
