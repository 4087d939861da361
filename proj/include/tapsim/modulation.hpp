#pragma once

#include <cstddef>
#include <iosfwd>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace tapsim::modulation {

using Vec2 = Eigen::Vector2d;

/// Amplitude-modulated tap: oscillation depth decays from full to zero while
/// the mean level rises to a_max.
struct AmTapParams {
  double f_am = 200.0;   // Hz
  double tau = 0.030;    // s
  double t_att = 0.100;  // s
  double a_max = 1.0;

  void validate() const;
};

/// Laterally modulated tap: constant amplitude, focus swings along `axis`
/// with an extent that shrinks from size_max toward size_min.
struct LmTapParams {
  double f_lm = 100.0;       // Hz
  double size_max = 0.010;   // m
  double size_min = 0.0006;  // m
  double tau = 0.030;        // s
  double t_att = 0.100;      // s
  double a_max = 1.0;
  Vec2 axis = Vec2::UnitX();

  void validate() const;
};

/// Low-frequency, sub-millimetre lateral modulation held during sustained
/// contact. Construction enforces 5 <= f_lm <= 15 Hz and 0 < size <= 1 mm.
class StationaryLmParams {
 public:
  static constexpr double kMinFrequency = 5.0;
  static constexpr double kMaxFrequency = 15.0;
  static constexpr double kMaxSize = 0.001;

  StationaryLmParams();
  StationaryLmParams(double f_lm, double size, double a_max = 1.0, Vec2 axis = Vec2::UnitX());

  [[nodiscard]] double f_lm() const { return f_lm_; }
  [[nodiscard]] double size() const { return size_; }
  [[nodiscard]] double a_max() const { return a_max_; }
  [[nodiscard]] const Vec2& axis() const { return axis_; }

 private:
  double f_lm_;
  double size_;
  double a_max_;
  Vec2 axis_;
};

struct DriveSample {
  double amplitude_scale = 0.0;
  Vec2 focus_offset = Vec2::Zero();  // m, added to the contact anchor
};

struct FrameSeries {
  double rate = 1000.0;
  double t0 = 0.0;
  std::vector<DriveSample> samples;

  [[nodiscard]] double time_at(std::size_t n) const { return t0 + static_cast<double>(n) / rate; }
};

using Profile = std::variant<AmTapParams, LmTapParams, StationaryLmParams>;

DriveSample am_tap_sample(double t, const AmTapParams& p);
DriveSample lm_tap_sample(double t, const LmTapParams& p);
DriveSample stationary_lm_sample(double t, const StationaryLmParams& p);
DriveSample evaluate(const Profile& profile, double t);

/// floor(duration * rate) samples, sample n taken at t0 + n / rate.
FrameSeries sample_profile(const Profile& profile, double rate, double duration, double t0 = 0.0);

/// `t_s,amplitude,offset_u_mm,offset_v_mm`, nine significant digits.
void write_waveform_csv(std::ostream& out, const FrameSeries& series);

}  // namespace tapsim::modulation
