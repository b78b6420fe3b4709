#pragma once

namespace poseval {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace poseval
