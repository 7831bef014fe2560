#pragma once

namespace qss {

inline constexpr const char* version = "0.1.0";

}  // namespace qss
