#pragma once

namespace gil {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gil
