#pragma once

namespace hplus {

inline constexpr const char* version = "0.1.0";

} // namespace hplus
