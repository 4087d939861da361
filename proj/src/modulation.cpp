#include "tapsim/modulation.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "tapsim/error.hpp"
#include "tapsim/text_format.hpp"

namespace tapsim::modulation {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

void require_time(double t) {
  if (!(t >= 0.0)) throw InvalidArgument("profile time must be >= 0, got " + std::to_string(t));
}

bool is_unit(const Vec2& v) { return std::abs(v.norm() - 1.0) <= 1e-9; }

}  // namespace

void AmTapParams::validate() const {
  require(f_am > 0.0, "f_am must be positive");
  require(tau > 0.0, "tau must be positive");
  require(t_att > 0.0, "t_att must be positive");
  require(a_max > 0.0 && a_max <= 1.0, "a_max must lie in (0, 1]");
}

void LmTapParams::validate() const {
  require(f_lm > 0.0, "f_lm must be positive");
  require(size_min >= 0.0, "size_min must be >= 0");
  require(size_max > size_min, "size_max must exceed size_min");
  require(tau > 0.0, "tau must be positive");
  require(t_att > 0.0, "t_att must be positive");
  require(a_max > 0.0 && a_max <= 1.0, "a_max must lie in (0, 1]");
  require(is_unit(axis), "axis must be a unit vector");
}

StationaryLmParams::StationaryLmParams() : StationaryLmParams(10.0, 0.0006) {}

StationaryLmParams::StationaryLmParams(double f_lm, double size, double a_max, Vec2 axis)
    : f_lm_(f_lm), size_(size), a_max_(a_max), axis_(std::move(axis)) {
  if (!(f_lm >= kMinFrequency && f_lm <= kMaxFrequency)) {
    throw InvalidArgument("stationary f_lm " + format_g9(f_lm) + " Hz outside the 5-15 Hz band");
  }
  if (!(size > 0.0 && size <= kMaxSize)) {
    throw InvalidArgument("stationary size " + format_g9(size * 1e3) + " mm must be positive and at most 1 mm");
  }
  require(a_max > 0.0 && a_max <= 1.0, "a_max must lie in (0, 1]");
  require(is_unit(axis_), "axis must be a unit vector");
}

DriveSample am_tap_sample(double t, const AmTapParams& p) {
  require_time(t);
  p.validate();
  if (t >= p.t_att) return {p.a_max, Vec2::Zero()};
  const double depth = std::exp(-t / p.tau);
  const double swing = 0.5 * (1.0 + std::sin(kTwoPi * p.f_am * t - 0.5 * std::numbers::pi));
  return {p.a_max * ((1.0 - depth) + depth * swing), Vec2::Zero()};
}

DriveSample lm_tap_sample(double t, const LmTapParams& p) {
  require_time(t);
  p.validate();
  const double extent = t < p.t_att ? std::max(p.size_min, p.size_max * std::exp(-t / p.tau)) : p.size_min;
  return {p.a_max, (0.5 * extent * std::sin(kTwoPi * p.f_lm * t)) * p.axis};
}

DriveSample stationary_lm_sample(double t, const StationaryLmParams& p) {
  require_time(t);
  return {p.a_max(), (0.5 * p.size() * std::sin(kTwoPi * p.f_lm() * t)) * p.axis()};
}

DriveSample evaluate(const Profile& profile, double t) {
  return std::visit(
      [t](const auto& p) -> DriveSample {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AmTapParams>) {
          return am_tap_sample(t, p);
        } else if constexpr (std::is_same_v<P, LmTapParams>) {
          return lm_tap_sample(t, p);
        } else {
          return stationary_lm_sample(t, p);
        }
      },
      profile);
}

FrameSeries sample_profile(const Profile& profile, double rate, double duration, double t0) {
  if (!(rate > 0.0)) throw InvalidArgument("sample rate must be positive");
  if (!(duration > 0.0)) throw InvalidArgument("duration must be positive");
  const auto count = static_cast<std::size_t>(std::floor(duration * rate + 1e-9));
  if (count == 0) throw InvalidArgument("duration shorter than one sample period");
  FrameSeries series;
  series.rate = rate;
  series.t0 = t0;
  series.samples.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    series.samples.push_back(evaluate(profile, series.time_at(n)));
  }
  return series;
}

void write_waveform_csv(std::ostream& out, const FrameSeries& series) {
  out << "t_s,amplitude,offset_u_mm,offset_v_mm\n";
  for (std::size_t n = 0; n < series.samples.size(); ++n) {
    const auto& s = series.samples[n];
    out << format_g9(series.time_at(n)) << ',' << format_g9(s.amplitude_scale) << ','
        << format_g9(s.focus_offset.x() * 1e3) << ',' << format_g9(s.focus_offset.y() * 1e3) << '\n';
  }
}

}  // namespace tapsim::modulation
