#include "tapsim/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "tapsim/error.hpp"

namespace tapsim::field {
namespace {

// 2 J1(x) / x = sum_m (-1)^m u^m / (m! (m+1)!), u = x^2 / 4.
constexpr int kSeriesTerms = 20;
constexpr double kSeriesLimit = 4.0;

constexpr std::array<double, kSeriesTerms> make_series() {
  std::array<double, kSeriesTerms> c{};
  double fm = 1.0;   // m!
  double fm1 = 1.0;  // (m+1)!
  for (int m = 0; m < kSeriesTerms; ++m) {
    if (m > 0) {
      fm *= m;
      fm1 *= (m + 1);
    }
    c[m] = ((m % 2 == 0) ? 1.0 : -1.0) / (fm * fm1);
  }
  return c;
}

constexpr auto kSeries = make_series();

std::string cell_label(int i, int j) {
  return "cell (" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

DriveVector DriveVector::uniform(std::size_t n, double amplitude) {
  return DriveVector{std::vector<double>(n, 0.0), std::vector<double>(n, amplitude)};
}

void DriveVector::validate(std::size_t expected_size) const {
  if (phases.size() != expected_size || amplitudes.size() != expected_size) {
    throw InvalidArgument("drive has " + std::to_string(phases.size()) + " phases and " +
                          std::to_string(amplitudes.size()) + " amplitudes, expected " +
                          std::to_string(expected_size));
  }
  for (std::size_t i = 0; i < expected_size; ++i) {
    if (!(amplitudes[i] >= 0.0 && amplitudes[i] <= 1.0)) {
      throw InvalidArgument("amplitude " + std::to_string(i) + " outside [0, 1]");
    }
    if (!(phases[i] >= 0.0 && phases[i] < kTwoPi)) {
      throw InvalidArgument("phase " + std::to_string(i) + " outside [0, 2pi)");
    }
  }
}

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double piston_directivity(double ka, double cos_theta) {
  const double sin2 = std::max(0.0, 1.0 - cos_theta * cos_theta);
  const double x2 = ka * ka * sin2;
  if (x2 <= kSeriesLimit * kSeriesLimit) {
    const double u = 0.25 * x2;
    double acc = kSeries[kSeriesTerms - 1];
    for (int m = kSeriesTerms - 2; m >= 0; --m) {
      acc = acc * u + kSeries[m];
    }
    return acc;
  }
  const double x = std::sqrt(x2);
  return 2.0 * std::cyl_bessel_j(1.0, x) / x;
}

double radiation_pressure(Complex p, double air_density, double sound_speed) {
  return 2.0 * std::norm(p) / (air_density * sound_speed * sound_speed);
}

DriveVector quantize_phases(const DriveVector& drive, int bits) {
  if (bits < 1 || bits > 16) {
    throw InvalidArgument("phase quantization needs 1 <= bits <= 16, got " + std::to_string(bits));
  }
  const long levels = 1L << bits;
  const double step = kTwoPi / static_cast<double>(levels);
  DriveVector out = drive;
  for (double& phi : out.phases) {
    long q = std::lround(phi / step) % levels;
    if (q < 0) q += levels;
    phi = static_cast<double>(q) * step;
  }
  return out;
}

GridSpec GridSpec::centered(const Vec3& center, const Vec3& axis_u, const Vec3& axis_v, int nu, int nv,
                            double spacing) {
  GridSpec g;
  g.axis_u = axis_u;
  g.axis_v = axis_v;
  g.nu = nu;
  g.nv = nv;
  g.spacing = spacing;
  g.origin = center - 0.5 * (nu - 1) * spacing * axis_u - 0.5 * (nv - 1) * spacing * axis_v;
  return g;
}

Vec3 GridSpec::point(int i, int j) const {
  return origin + (i * spacing) * axis_u + (j * spacing) * axis_v;
}

void GridSpec::validate() const {
  if (nu < 1 || nv < 1) throw InvalidArgument("grid needs nu >= 1 and nv >= 1");
  if (!(spacing > 0.0)) throw InvalidArgument("grid spacing must be positive");
  if (std::abs(axis_u.norm() - 1.0) > 1e-9 || std::abs(axis_v.norm() - 1.0) > 1e-9) {
    throw InvalidArgument("grid axes must be unit length");
  }
  if (std::abs(axis_u.dot(axis_v)) > 1e-9) throw InvalidArgument("grid axes must be orthogonal");
}

AcousticField::AcousticField(ArrayModel array, FieldModel model)
    : array_(std::move(array)), model_(model) {
  if (!(model_.p_ref > 0.0) || !(model_.air_density > 0.0) || !(model_.piston_radius > 0.0)) {
    throw InvalidArgument("field model needs positive p_ref, air density and piston radius");
  }
  k_ = array_.wavenumber();
  ka_ = k_ * model_.piston_radius;
  const auto n = array_.size();
  px_.reserve(n); py_.reserve(n); pz_.reserve(n);
  nx_.reserve(n); ny_.reserve(n); nz_.reserve(n);
  for (const auto& t : array_.transducers()) {
    px_.push_back(t.position.x());
    py_.push_back(t.position.y());
    pz_.push_back(t.position.z());
    nx_.push_back(t.normal.x());
    ny_.push_back(t.normal.y());
    nz_.push_back(t.normal.z());
  }
}

void AcousticField::check_distance(std::size_t index, double distance_sq) const {
  if (!(distance_sq >= kMinDistance * kMinDistance)) {
    throw InvalidArgument("point lies within 1 mm of transducer " + std::to_string(index));
  }
}

DriveVector AcousticField::focus_phases(const Vec3& focus) const {
  const std::size_t n = size();
  DriveVector drive = DriveVector::uniform(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = focus.x() - px_[i];
    const double dy = focus.y() - py_[i];
    const double dz = focus.z() - pz_[i];
    const double d2 = dx * dx + dy * dy + dz * dz;
    check_distance(i, d2);
    drive.phases[i] = wrap_phase(-k_ * std::sqrt(d2));
  }
  return drive;
}

Complex AcousticField::pressure_at(const DriveVector& drive, const Vec3& point) const {
  const std::size_t n = size();
  if (drive.phases.size() != n || drive.amplitudes.size() != n) {
    drive.validate(n);
  }
  const bool piston = model_.directivity == Directivity::piston;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = point.x() - px_[i];
    const double dy = point.y() - py_[i];
    const double dz = point.z() - pz_[i];
    const double d2 = dx * dx + dy * dy + dz * dz;
    check_distance(i, d2);
    const double amp = drive.amplitudes[i];
    if (amp == 0.0) continue;
    const double d = std::sqrt(d2);
    double mag = amp * model_.p_ref / d;
    if (piston) {
      const double cos_theta = (dx * nx_[i] + dy * ny_[i] + dz * nz_[i]) / d;
      mag *= piston_directivity(ka_, cos_theta);
    }
    const double phase = k_ * d + drive.phases[i];
    re += mag * std::cos(phase);
    im += mag * std::sin(phase);
  }
  return {re, im};
}

double AcousticField::radiation_pressure(Complex p) const {
  return field::radiation_pressure(p, model_.air_density, array_.sound_speed());
}

double AcousticField::element_magnitude(std::size_t index, const Vec3& point) const {
  const Vec3 r(px_.at(index), py_[index], pz_[index]);
  const Vec3 delta = point - r;
  check_distance(index, delta.squaredNorm());
  const double d = delta.norm();
  double mag = model_.p_ref / d;
  if (model_.directivity == Directivity::piston) {
    const Vec3 normal(nx_[index], ny_[index], nz_[index]);
    mag *= piston_directivity(ka_, normal.dot(delta) / d);
  }
  return mag;
}

FieldGrid AcousticField::sample_grid(const DriveVector& drive, const GridSpec& grid) const {
  grid.validate();
  drive.validate(size());

  FieldGrid out;
  out.spec = grid;
  out.complex_pressure.assign(grid.cells(), Complex{});
  out.radiation_pressure.assign(grid.cells(), 0.0);

  const int rows = grid.nv;
  const int workers =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, rows);

  std::mutex error_mutex;
  std::size_t error_cell = std::numeric_limits<std::size_t>::max();
  std::string error_message;

  auto work = [&](int first_row, int stride) {
    for (int j = first_row; j < rows; j += stride) {
      for (int i = 0; i < grid.nu; ++i) {
        const std::size_t idx = out.index(i, j);
        try {
          const Complex p = pressure_at(drive, grid.point(i, j));
          out.complex_pressure[idx] = p;
          out.radiation_pressure[idx] = radiation_pressure(p);
        } catch (const InvalidArgument& e) {
          std::lock_guard lock(error_mutex);
          if (idx < error_cell) {
            error_cell = idx;
            error_message = cell_label(i, j) + ": " + e.what();
          }
        }
      }
    }
  };

  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  if (!error_message.empty()) throw InvalidArgument(error_message);
  return out;
}

namespace {

// Interpolated fractional index where the profile first drops below `half`
// walking away from the peak in direction `step`.
std::optional<double> half_crossing(const std::vector<double>& line, int peak, int step, double half) {
  const int n = static_cast<int>(line.size());
  for (int i = peak + step; i >= 0 && i < n; i += step) {
    if (line[static_cast<std::size_t>(i)] < half) {
      const double inner = line[static_cast<std::size_t>(i - step)];
      const double outer = line[static_cast<std::size_t>(i)];
      const double frac = (inner - half) / (inner - outer);
      return static_cast<double>(i - step) + step * frac;
    }
  }
  return std::nullopt;
}

std::optional<double> fwhm_along(const std::vector<double>& line, int peak, double half, double spacing) {
  const auto lo = half_crossing(line, peak, -1, half);
  const auto hi = half_crossing(line, peak, +1, half);
  if (!lo || !hi) return std::nullopt;
  return (*hi - *lo) * spacing;
}

}  // namespace

SpotMetrics focal_metrics(const FieldGrid& grid) {
  const auto& g = grid.spec;
  if (g.nu < 3 || g.nv < 3) {
    throw InvalidArgument("focal metrics need at least 3 samples per axis");
  }
  if (grid.radiation_pressure.size() != g.cells()) {
    throw InvalidArgument("field grid value count does not match its spec");
  }

  SpotMetrics m;
  m.peak_value = -std::numeric_limits<double>::infinity();
  // Strict > over a lexicographic (i, j) scan keeps the lowest index on ties.
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const double v = grid.radiation_pressure[grid.index(i, j)];
      if (v > m.peak_value) {
        m.peak_value = v;
        m.peak_i = i;
        m.peak_j = j;
      }
    }
  }
  m.peak_location = g.point(m.peak_i, m.peak_j);

  const double half = 0.5 * m.peak_value;
  std::vector<double> along_u(static_cast<std::size_t>(g.nu));
  for (int i = 0; i < g.nu; ++i) along_u[static_cast<std::size_t>(i)] = grid.radiation_pressure[grid.index(i, m.peak_j)];
  std::vector<double> along_v(static_cast<std::size_t>(g.nv));
  for (int j = 0; j < g.nv; ++j) along_v[static_cast<std::size_t>(j)] = grid.radiation_pressure[grid.index(m.peak_i, j)];

  m.fwhm_u = fwhm_along(along_u, m.peak_i, half, g.spacing);
  m.fwhm_v = fwhm_along(along_v, m.peak_j, half, g.spacing);
  return m;
}

}  // namespace tapsim::field
