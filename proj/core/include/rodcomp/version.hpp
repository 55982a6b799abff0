#pragma once

namespace rodcomp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rodcomp
