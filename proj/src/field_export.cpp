#include "tapsim/field_export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include "tapsim/text_format.hpp"

namespace tapsim::field {

void write_field_csv(std::ostream& out, const FieldGrid& grid) {
  const auto& g = grid.spec;
  const double cu = 0.5 * (g.nu - 1);
  const double cv = 0.5 * (g.nv - 1);
  out << "u_mm,v_mm,re_p,im_p,radiation_Pa\n";
  for (int j = 0; j < g.nv; ++j) {
    for (int i = 0; i < g.nu; ++i) {
      const auto idx = grid.index(i, j);
      const auto& p = grid.complex_pressure[idx];
      out << format_g9((i - cu) * g.spacing * 1e3) << ',' << format_g9((j - cv) * g.spacing * 1e3) << ','
          << format_g9(p.real()) << ',' << format_g9(p.imag()) << ','
          << format_g9(grid.radiation_pressure[idx]) << '\n';
    }
  }
}

void write_field_pgm(std::ostream& out, const FieldGrid& grid) {
  const auto& g = grid.spec;
  const double peak = grid.radiation_pressure.empty()
                          ? 0.0
                          : *std::max_element(grid.radiation_pressure.begin(), grid.radiation_pressure.end());
  out << "P5\n" << g.nu << ' ' << g.nv << "\n65535\n";
  for (int j = g.nv - 1; j >= 0; --j) {
    for (int i = 0; i < g.nu; ++i) {
      const double v = grid.radiation_pressure[grid.index(i, j)];
      const auto level =
          peak > 0.0 ? static_cast<std::uint16_t>(std::lround(std::clamp(v / peak, 0.0, 1.0) * 65535.0)) : 0;
      const char bytes[2] = {static_cast<char>(level >> 8), static_cast<char>(level & 0xff)};
      out.write(bytes, 2);
    }
  }
}

}  // namespace tapsim::field
