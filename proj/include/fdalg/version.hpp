#pragma once

namespace fdalg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fdalg
