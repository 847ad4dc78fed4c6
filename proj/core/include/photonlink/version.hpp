#pragma once

namespace photonlink {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace photonlink
