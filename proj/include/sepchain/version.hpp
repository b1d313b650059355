#pragma once

namespace sepchain {
inline constexpr const char* kVersion = "0.1.0";
}
