#pragma once

namespace ale {
inline constexpr const char* kVersion = "0.1.0";
}
