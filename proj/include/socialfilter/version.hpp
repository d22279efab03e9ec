#pragma once

namespace socialfilter {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace socialfilter
