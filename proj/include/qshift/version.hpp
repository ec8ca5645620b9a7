#pragma once

namespace qshift {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qshift
