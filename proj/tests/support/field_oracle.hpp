#pragma once

// Reference field evaluation for tests. Deliberately naive: AoS element
// access, std::polar per term, std::cyl_bessel_j for the piston term.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tapsim/field.hpp"

namespace tapsim::testing {

inline double oracle_directivity(const field::FieldModel& model, double k, const Eigen::Vector3d& normal,
                                 const Eigen::Vector3d& delta) {
  if (model.directivity == field::Directivity::omni) return 1.0;
  const double d = delta.norm();
  const double cos_t = std::clamp(normal.dot(delta) / d, -1.0, 1.0);
  const double sin_t = std::sqrt(1.0 - cos_t * cos_t);
  const double x = k * model.piston_radius * sin_t;
  if (x < 1e-12) return 1.0;
  return 2.0 * std::cyl_bessel_j(1.0, x) / x;
}

inline std::complex<double> oracle_pressure(const geometry::ArrayModel& array, const field::FieldModel& model,
                                            const field::DriveVector& drive, const Eigen::Vector3d& point) {
  const double k = 2.0 * std::numbers::pi * array.carrier_frequency() / array.sound_speed();
  std::complex<double> sum{0.0, 0.0};
  const auto& ts = array.transducers();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Eigen::Vector3d delta = point - ts[i].position;
    const double d = delta.norm();
    const double mag = drive.amplitudes[i] * model.p_ref * oracle_directivity(model, k, ts[i].normal, delta) / d;
    sum += std::polar(mag, k * d + drive.phases[i]);
  }
  return sum;
}

/// Coherent-sum bound: sum of per-element magnitudes at full amplitude.
inline double oracle_coherent_bound(const geometry::ArrayModel& array, const field::FieldModel& model,
                                    const Eigen::Vector3d& point) {
  const double k = 2.0 * std::numbers::pi * array.carrier_frequency() / array.sound_speed();
  double sum = 0.0;
  for (const auto& t : array.transducers()) {
    const Eigen::Vector3d delta = point - t.position;
    sum += model.p_ref * oracle_directivity(model, k, t.normal, delta) / delta.norm();
  }
  return sum;
}

inline double rel_err(std::complex<double> a, std::complex<double> b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace tapsim::testing
