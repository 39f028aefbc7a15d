#pragma once

namespace twolevel {

inline constexpr const char* kVersion = "0.1.0";

} // namespace twolevel
