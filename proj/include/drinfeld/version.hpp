#pragma once

namespace drinfeld {
inline constexpr const char* kVersion = "0.1.0";
}
