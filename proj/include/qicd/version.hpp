#pragma once

namespace qicd {
inline constexpr const char* kVersion = "0.1.0";
}
