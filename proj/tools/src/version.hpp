#pragma once

namespace mandelq::cli {

/// Stamped into JSON metadata; bump when output formats change.
inline constexpr const char* k_tool_version = "1.0.0";

}  // namespace mandelq::cli
