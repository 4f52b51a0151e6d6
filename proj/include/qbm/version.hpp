#pragma once

namespace qbm {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qbm
