#pragma once

namespace ftm {
inline constexpr const char* version = "0.1.0";
}
