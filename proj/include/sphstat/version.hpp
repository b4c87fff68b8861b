#pragma once

namespace sphstat {

inline constexpr const char* kToolName = "sphstat";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace sphstat
