#include "dge/error.hpp"

namespace dge {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::empty_snapshot:
      return "empty_snapshot";
    case errc::empty_level:
      return "empty_level";
    case errc::dim_mismatch:
      return "dim_mismatch";
    case errc::level_mismatch:
      return "level_mismatch";
    case errc::non_finite:
      return "non_finite";
    case errc::bad_argument:
      return "bad_argument";
    case errc::degenerate_draw:
      return "degenerate_draw";
    case errc::empty_input:
      return "empty_input";
    case errc::too_large:
      return "too_large";
    case errc::insufficient_samples:
      return "insufficient_samples";
    case errc::dim_too_large:
      return "dim_too_large";
    case errc::no_common_level:
      return "no_common_level";
    case errc::missing_bank:
      return "missing_bank";
    case errc::metric_mismatch:
      return "metric_mismatch";
    case errc::length_mismatch:
      return "length_mismatch";
    case errc::not_normalized:
      return "not_normalized";
    case errc::degenerate_ranks:
      return "degenerate_ranks";
    case errc::all_zero:
      return "all_zero";
    case errc::bad_magic:
      return "bad_magic";
    case errc::unsupported_version:
      return "unsupported_version";
    case errc::truncated:
      return "truncated";
    case errc::trailing_bytes:
      return "trailing_bytes";
    case errc::ragged_rows:
      return "ragged_rows";
    case errc::non_numeric:
      return "non_numeric";
    case errc::bad_config:
      return "bad_config";
    case errc::io_failure:
      return "io_failure";
  }
  return "unknown";
}

}  // namespace dge
