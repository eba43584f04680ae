#pragma once

namespace chsh {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace chsh
