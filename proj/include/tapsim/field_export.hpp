#pragma once

#include <iosfwd>

#include "tapsim/field.hpp"

namespace tapsim::field {

/// Header `u_mm,v_mm,re_p,im_p,radiation_Pa`; u/v are offsets from the grid
/// center along its axes. Rows follow the grid's storage order.
void write_field_csv(std::ostream& out, const FieldGrid& grid);

/// 16-bit binary PGM (P5) of radiation pressure normalized to its maximum.
/// Width nu, height nv; the top image row is the highest v index.
void write_field_pgm(std::ostream& out, const FieldGrid& grid);

}  // namespace tapsim::field
