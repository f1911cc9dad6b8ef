#pragma once

namespace trinv {

inline constexpr const char* version = "0.1.0";

} // namespace trinv
