#pragma once

namespace aida {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kGeneratorName = "aida-toolkit/0.1.0";

}  // namespace aida
