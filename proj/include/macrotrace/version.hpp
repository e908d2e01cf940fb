#pragma once

namespace macrotrace {

inline constexpr const char* kToolName = "macrotrace";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace macrotrace
