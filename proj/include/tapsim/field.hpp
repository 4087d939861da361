#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "tapsim/geometry.hpp"

namespace tapsim::field {

using Complex = std::complex<double>;
using geometry::ArrayModel;
using geometry::Vec3;

inline constexpr double kAirDensity = 1.21;       // kg/m^3
inline constexpr double kPistonRadius = 4.5e-3;   // m
inline constexpr double kMinDistance = 1e-3;      // m
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Directivity { piston, omni };

/// Radiation model shared by every element of an array.
struct FieldModel {
  Directivity directivity = Directivity::piston;
  double piston_radius = kPistonRadius;
  double p_ref = 1.0;  // Pa at 1 m on axis, full amplitude
  double air_density = kAirDensity;
};

/// Per-transducer drive: phase in [0, 2pi), amplitude in [0, 1].
struct DriveVector {
  std::vector<double> phases;
  std::vector<double> amplitudes;

  static DriveVector uniform(std::size_t n, double amplitude = 1.0);
  [[nodiscard]] std::size_t size() const { return phases.size(); }
  void validate(std::size_t expected_size) const;
};

/// Wraps an angle into [0, 2pi).
double wrap_phase(double phi);

/// Far-field rigid piston directivity 2 J1(x) / x evaluated at
/// x = ka sin(theta), given ka and cos(theta).
double piston_directivity(double ka, double cos_theta);

/// Radiation pressure on a perfectly reflecting target, 2|p|^2 / (rho c^2).
double radiation_pressure(Complex p, double air_density, double sound_speed);

/// Rounds each phase to the nearest multiple of 2pi / 2^bits (1 <= bits <= 16).
DriveVector quantize_phases(const DriveVector& drive, int bits);

/// Sampling plane: cell (i, j) sits at origin + spacing * (i * axis_u + j * axis_v).
struct GridSpec {
  Vec3 origin = Vec3::Zero();
  Vec3 axis_u = Vec3::UnitX();
  Vec3 axis_v = Vec3::UnitY();
  int nu = 1;
  int nv = 1;
  double spacing = 1e-3;

  /// Grid whose middle cell (or cell-corner, for even counts) is `center`.
  static GridSpec centered(const Vec3& center, const Vec3& axis_u, const Vec3& axis_v,
                           int nu, int nv, double spacing);
  [[nodiscard]] Vec3 point(int i, int j) const;
  [[nodiscard]] std::size_t cells() const {
    return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv);
  }
  void validate() const;
};

/// Row-major in v: cell (i, j) lives at index j * nu + i.
struct FieldGrid {
  GridSpec spec;
  std::vector<Complex> complex_pressure;
  std::vector<double> radiation_pressure;

  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(spec.nu) + static_cast<std::size_t>(i);
  }
};

struct SpotMetrics {
  double peak_value = 0.0;
  Vec3 peak_location = Vec3::Zero();
  int peak_i = 0;
  int peak_j = 0;
  std::optional<double> fwhm_u;
  std::optional<double> fwhm_v;
};

/// Linear acoustic field of a driven array. Holds a copy of the array with
/// its element data laid out for the summation loop.
class AcousticField {
 public:
  explicit AcousticField(ArrayModel array, FieldModel model = {});

  [[nodiscard]] const ArrayModel& array() const { return array_; }
  [[nodiscard]] const FieldModel& model() const { return model_; }
  [[nodiscard]] std::size_t size() const { return array_.size(); }

  /// Single-focus phases: phase_i = -k |focus - r_i| mod 2pi, amplitudes 1.
  DriveVector focus_phases(const Vec3& focus) const;

  Complex pressure_at(const DriveVector& drive, const Vec3& point) const;

  [[nodiscard]] double radiation_pressure(Complex p) const;

  /// Per-element magnitude at `point` for unit amplitude; the sum over
  /// elements bounds |pressure_at| for any phases.
  [[nodiscard]] double element_magnitude(std::size_t index, const Vec3& point) const;

  FieldGrid sample_grid(const DriveVector& drive, const GridSpec& grid) const;

 private:
  void check_distance(std::size_t index, double distance_sq) const;

  ArrayModel array_;
  FieldModel model_;
  double k_ = 0.0;
  double ka_ = 0.0;
  std::vector<double> px_, py_, pz_;
  std::vector<double> nx_, ny_, nz_;
};

/// Peak and FWHM along both grid axes through the peak. Requires at least
/// three samples per axis; a missing half-maximum crossing leaves that
/// axis's FWHM empty.
SpotMetrics focal_metrics(const FieldGrid& grid);

}  // namespace tapsim::field
