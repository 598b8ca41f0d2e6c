#pragma once

namespace pump {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pump
