#pragma once

namespace uet {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace uet
