#pragma once

namespace bernergy {

inline constexpr const char* version = "0.1.0";

}  // namespace bernergy
