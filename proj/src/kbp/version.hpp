#pragma once

namespace kbp {

inline constexpr const char* kVersionString = "0.1.0";

}  // namespace kbp
