#pragma once

namespace itsa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace itsa
