#pragma once

namespace collapse_radiance {

inline constexpr const char* version = "1.0.0";

}  // namespace collapse_radiance
