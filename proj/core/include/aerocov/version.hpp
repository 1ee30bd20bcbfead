#pragma once

namespace aerocov {

inline constexpr const char* kVersion = "0.1.0";

} // namespace aerocov
