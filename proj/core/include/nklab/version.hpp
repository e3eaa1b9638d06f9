#pragma once

namespace nklab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nklab
