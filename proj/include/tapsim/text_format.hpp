#pragma once

#include <string>

namespace tapsim {

/// Nine significant digits, "%.9g" style, with negative zero printed as "0".
/// All CSV outputs go through this so digests are stable.
std::string format_g9(double value);

}  // namespace tapsim
