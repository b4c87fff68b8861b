#pragma once

#include <stdexcept>
#include <string>

namespace sphstat {

enum class errc {
  zero_vector,
  not_unit,
  bad_dimension,
  dimension_mismatch,
  angle_out_of_range,
  wrong_hemisphere,
  undefined_mean_direction,
  degenerate_top_eigenvalue,
  non_unique_projection,
  bad_projector,
  bad_compact_set,
  bad_level,
  bad_window,
  not_symmetric,
  kind_mismatch,
  parse_error,
  norm_tolerance,
  io_error,
  numeric_failure,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::zero_vector: return "ZeroVector";
    case errc::not_unit: return "NotUnit";
    case errc::bad_dimension: return "BadDimension";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::angle_out_of_range: return "AngleOutOfRange";
    case errc::wrong_hemisphere: return "WrongHemisphere";
    case errc::undefined_mean_direction: return "UndefinedMeanDirection";
    case errc::degenerate_top_eigenvalue: return "DegenerateTopEigenvalue";
    case errc::non_unique_projection: return "NonUniqueProjection";
    case errc::bad_projector: return "BadProjector";
    case errc::bad_compact_set: return "BadCompactSet";
    case errc::bad_level: return "BadLevel";
    case errc::bad_window: return "BadWindow";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::kind_mismatch: return "KindMismatch";
    case errc::parse_error: return "ParseError";
    case errc::norm_tolerance: return "NormTolerance";
    case errc::io_error: return "IoError";
    case errc::numeric_failure: return "NumericFailure";
  }
  return "UnknownError";
}

/// Library-wide exception; carries a machine-checkable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sphstat
