#pragma once

namespace slowbeam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace slowbeam
