#pragma once

namespace iqb {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace iqb
