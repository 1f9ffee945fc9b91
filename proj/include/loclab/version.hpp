#pragma once

namespace loclab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace loclab
