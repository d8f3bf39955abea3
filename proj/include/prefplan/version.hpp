#pragma once

namespace prefplan {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace prefplan
