#include "tapsim/text_format.hpp"

#include <cstdio>

namespace tapsim {

std::string format_g9(double value) {
  if (value == 0.0) value = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace tapsim
