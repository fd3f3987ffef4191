#pragma once

namespace lat {
inline constexpr const char* kVersion = "0.1.0";
}
