#pragma once

namespace snowflake {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace snowflake
