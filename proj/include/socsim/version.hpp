#pragma once

namespace socsim {

inline constexpr const char* version_string = "0.1.0";

// Bumped whenever the JSON run-summary layout changes.
inline constexpr int summary_schema_version = 1;

}  // namespace socsim
