#pragma once

#include <string>
#include <string_view>

namespace tapsim::io {

inline constexpr std::string_view kDigestName = "sha256";

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace tapsim::io
