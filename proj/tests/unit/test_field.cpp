#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support/field_oracle.hpp"
#include "tapsim/error.hpp"
#include "tapsim/field.hpp"

using namespace tapsim;
using namespace tapsim::field;
using geometry::ArrayModel;
using tapsim::testing::oracle_coherent_bound;
using tapsim::testing::oracle_pressure;
using tapsim::testing::rel_err;

namespace {

double circular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

ArrayModel random_cloud(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> pos(-0.1, 0.1);
  std::uniform_real_distribution<double> tilt(-0.3, 0.3);
  std::vector<Vec3> p, nrm;
  for (std::size_t i = 0; i < n; ++i) {
    p.emplace_back(pos(rng), pos(rng), 0.02 * pos(rng));
    nrm.push_back(Vec3(tilt(rng), tilt(rng), 1.0).normalized());
  }
  return ArrayModel::from_points(p, nrm);
}

AcousticField omni_single() {
  FieldModel m;
  m.directivity = Directivity::omni;
  return AcousticField(ArrayModel::from_points({Vec3::Zero()}, {Vec3::UnitZ()}), m);
}

}  // namespace

TEST_CASE("piston directivity series matches the Bessel function") {
  const double ka = 2.0 * std::numbers::pi / (343.0 / 40000.0) * kPistonRadius;
  for (double c = -1.0; c <= 1.0; c += 0.001) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double x = ka * s;
    const double expected = x < 1e-12 ? 1.0 : 2.0 * std::cyl_bessel_j(1.0, x) / x;
    CHECK(std::abs(piston_directivity(ka, c) - expected) <= 1e-14);
  }
  // beyond the series range
  for (double ka_big : {5.0, 9.0, 20.0}) {
    const double x = ka_big * std::sin(1.0);
    CHECK(piston_directivity(ka_big, std::cos(1.0)) == doctest::Approx(2.0 * std::cyl_bessel_j(1.0, x) / x).epsilon(1e-12));
  }
  CHECK(piston_directivity(ka, 1.0) == 1.0);
}

TEST_CASE("focus_phases single element one wavelength away") {
  const AcousticField f(ArrayModel::from_points({Vec3::Zero()}, {Vec3::UnitZ()}));
  const double lambda = f.array().wavelength();
  const auto drive = f.focus_phases(Vec3(0, 0, lambda));
  CHECK(circular_distance(drive.phases[0], 0.0) <= 1e-9);
  CHECK(drive.amplitudes[0] == 1.0);
}

TEST_CASE("focus_phases equidistant elements share a phase") {
  const AcousticField f(ArrayModel::from_points({Vec3(-0.03, 0, 0), Vec3(0.03, 0, 0)}, {Vec3::UnitZ(), Vec3::UnitZ()}));
  const auto drive = f.focus_phases(Vec3(0, 0.01, 0.15));
  CHECK(drive.phases[0] == drive.phases[1]);
}

TEST_CASE("focus_phases reaches the coherent-sum bound on a random 16-element array") {
  std::mt19937_64 rng(7);
  const auto array = random_cloud(rng, 16);
  const AcousticField f(array);
  const Vec3 focus(0.01, -0.02, 0.18);
  const auto drive = f.focus_phases(focus);
  const double bound = oracle_coherent_bound(array, f.model(), focus);
  CHECK(std::abs(std::abs(f.pressure_at(drive, focus)) - bound) / bound <= 1e-9);
}

TEST_CASE("focus_phases rejects a focus on top of an element") {
  const AcousticField f(geometry::default_rig());
  const auto& t0 = f.array().transducers()[0].position;
  CHECK_THROWS_AS(f.focus_phases(t0 + Vec3(0, 0, 0.0005)), InvalidArgument);
  CHECK_NOTHROW(f.focus_phases(t0 + Vec3(0, 0, 0.0011)));
}

TEST_CASE("quantize_phases") {
  DriveVector d{{std::numbers::pi / 3.0, 0.0}, {0.5, 1.0}};
  const auto q = quantize_phases(d, 8);
  const double step = kTwoPi / 256.0;
  CHECK(q.phases[0] == doctest::Approx(43.0 * step).epsilon(1e-15));  // pi/3 / step = 42.67
  CHECK(q.phases[1] == 0.0);
  CHECK(q.amplitudes == d.amplitudes);
  for (int bits = 1; bits <= 16; ++bits) CHECK(quantize_phases(DriveVector{{0.0}, {1.0}}, bits).phases[0] == 0.0);

  // a phase just under 2pi rounds up to the full turn and wraps to zero
  const auto wrapped = quantize_phases(DriveVector{{kTwoPi - 1e-6}, {1.0}}, 4);
  CHECK(wrapped.phases[0] == 0.0);

  CHECK_THROWS_AS(quantize_phases(d, 0), InvalidArgument);
  CHECK_THROWS_AS(quantize_phases(d, 17), InvalidArgument);
}

TEST_CASE("quantize_phases loses under 2% focus magnitude at 8 bits") {
  std::mt19937_64 rng(99);
  const AcousticField f(random_cloud(rng, 256));
  const Vec3 focus(-0.02, 0.03, 0.2);
  const auto exact = f.focus_phases(focus);
  const double full = std::abs(f.pressure_at(exact, focus));
  const double coarse = std::abs(f.pressure_at(quantize_phases(exact, 8), focus));
  CHECK(coarse >= 0.98 * full);
}

TEST_CASE("pressure_at basics") {
  const AcousticField rig(geometry::default_rig());
  CHECK(rig.pressure_at(DriveVector::uniform(rig.size(), 0.0), Vec3(0, 0, 0.2)) == Complex(0.0, 0.0));

  const auto single = omni_single();
  const double k = single.array().wavenumber();
  DriveVector d{{wrap_phase(-k * 1.0)}, {1.0}};
  const Complex p = single.pressure_at(d, Vec3(0, 0, 1.0));
  CHECK(std::abs(p - Complex(1.0, 0.0)) <= 1e-12);

  CHECK_THROWS_AS(single.pressure_at(d, Vec3(0, 0, 0.0009)), InvalidArgument);
  CHECK_THROWS_AS(single.pressure_at(DriveVector::uniform(2), Vec3(0, 0, 0.1)), InvalidArgument);
}

TEST_CASE("pressure_at on the default rig matches the naive oracle") {
  const AcousticField rig(geometry::default_rig());
  for (const Vec3 focus : {Vec3(0, 0, 0.2), Vec3(0.05, -0.03, 0.15), Vec3(-0.1, 0.02, 0.3)}) {
    const auto drive = rig.focus_phases(focus);
    for (const Vec3 probe : {focus, Vec3(focus + Vec3(0.004, 0.0, 0.0)), Vec3(0.0, 0.07, 0.1)}) {
      CHECK(rel_err(rig.pressure_at(drive, probe), oracle_pressure(rig.array(), rig.model(), drive, probe)) <= 1e-9);
    }
  }
}

TEST_CASE("radiation_pressure") {
  const double rho = kAirDensity, c = 343.0;
  CHECK(radiation_pressure(Complex(0, 0), rho, c) == 0.0);
  const double amp = std::sqrt(rho * c * c / 2.0);
  CHECK(radiation_pressure(Complex(amp, 0), rho, c) == doctest::Approx(1.0).epsilon(1e-14));
  const Complex p(3.0, -4.0);
  CHECK(radiation_pressure(2.0 * p, rho, c) == doctest::Approx(4.0 * radiation_pressure(p, rho, c)).epsilon(1e-14));
}

TEST_CASE("sample_grid single cell equals pressure_at") {
  const AcousticField rig(geometry::default_rig());
  const Vec3 q(0.01, 0.02, 0.2);
  const auto drive = rig.focus_phases(Vec3(0, 0, 0.2));
  GridSpec g;
  g.origin = q;
  const auto grid = rig.sample_grid(drive, g);
  REQUIRE(grid.complex_pressure.size() == 1);
  CHECK(grid.complex_pressure[0] == rig.pressure_at(drive, q));
  CHECK(grid.radiation_pressure[0] == rig.radiation_pressure(rig.pressure_at(drive, q)));
}

TEST_CASE("sample_grid is mirror symmetric for an on-axis focus") {
  const AcousticField rig(geometry::default_rig());
  const auto drive = rig.focus_phases(Vec3(0, 0, 0.2));
  const auto g = GridSpec::centered(Vec3(0, 0, 0.2), Vec3::UnitX(), Vec3::UnitY(), 21, 21, 0.003);
  const auto grid = rig.sample_grid(drive, g);
  for (int j = 0; j < g.nv; ++j) {
    for (int i = 0; i < g.nu; ++i) {
      const double a = grid.radiation_pressure[grid.index(i, j)];
      const double mu = grid.radiation_pressure[grid.index(g.nu - 1 - i, j)];
      const double mv = grid.radiation_pressure[grid.index(i, g.nv - 1 - j)];
      CHECK(std::abs(a - mu) <= 1e-9 * a);
      CHECK(std::abs(a - mv) <= 1e-9 * a);
    }
  }
}

TEST_CASE("sample_grid cells equal independent pressure_at calls bit for bit") {
  const AcousticField rig(geometry::default_rig());
  const auto drive = rig.focus_phases(Vec3(0.02, 0.0, 0.18));
  const auto g = GridSpec::centered(Vec3(0.02, 0, 0.18), Vec3::UnitX(), Vec3(0, 0.6, 0.8), 9, 7, 0.004);
  const auto grid = rig.sample_grid(drive, g);
  for (int j = 0; j < g.nv; ++j) {
    for (int i = 0; i < g.nu; ++i) {
      const Complex p = rig.pressure_at(drive, g.point(i, j));
      const Complex cell = grid.complex_pressure[grid.index(i, j)];
      CHECK(std::memcmp(&p, &cell, sizeof p) == 0);
      CHECK(grid.radiation_pressure[grid.index(i, j)] >= 0.0);
    }
  }
}

TEST_CASE("sample_grid error names the offending cell") {
  const AcousticField rig(geometry::default_rig());
  const auto drive = rig.focus_phases(Vec3(0, 0, 0.2));
  const Vec3 element = rig.array().transducers()[0].position;
  GridSpec g;
  g.origin = element - Vec3(0.02, 0, 0);
  g.nu = 5;
  g.spacing = 0.01;  // cell (2, 0) lands on the element
  try {
    (void)rig.sample_grid(drive, g);
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("cell (2, 0)") != std::string::npos);
  }

  GridSpec skew;
  skew.axis_v = Vec3(0.1, 1.0, 0).normalized();
  CHECK_THROWS_AS(rig.sample_grid(drive, skew), InvalidArgument);
  GridSpec zero;
  zero.spacing = 0.0;
  CHECK_THROWS_AS(rig.sample_grid(drive, zero), InvalidArgument);
}

TEST_CASE("focal_metrics on an analytic Gaussian") {
  const double sigma = 0.004, h = 0.0005;
  FieldGrid grid;
  grid.spec = GridSpec::centered(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 81, 61, h);
  grid.complex_pressure.assign(grid.spec.cells(), Complex{});
  grid.radiation_pressure.assign(grid.spec.cells(), 0.0);
  for (int j = 0; j < grid.spec.nv; ++j) {
    for (int i = 0; i < grid.spec.nu; ++i) {
      const Vec3 p = grid.spec.point(i, j);
      grid.radiation_pressure[grid.index(i, j)] = 3.0 * std::exp(-(p.x() * p.x() + p.y() * p.y()) / (2 * sigma * sigma));
    }
  }
  const auto m = focal_metrics(grid);
  CHECK(m.peak_value == 3.0);
  CHECK(m.peak_i == 40);
  CHECK(m.peak_j == 30);
  REQUIRE(m.fwhm_u);
  REQUIRE(m.fwhm_v);
  CHECK(std::abs(*m.fwhm_u - 2.3548 * sigma) <= h);
  CHECK(std::abs(*m.fwhm_v - 2.3548 * sigma) <= h);
}

TEST_CASE("focal_metrics constant grid and ties") {
  FieldGrid grid;
  grid.spec = GridSpec::centered(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 5, 4, 0.001);
  grid.complex_pressure.assign(grid.spec.cells(), Complex{});
  grid.radiation_pressure.assign(grid.spec.cells(), 2.0);
  const auto m = focal_metrics(grid);
  CHECK_FALSE(m.fwhm_u.has_value());
  CHECK_FALSE(m.fwhm_v.has_value());
  CHECK(m.peak_i == 0);
  CHECK(m.peak_j == 0);

  grid.radiation_pressure.assign(grid.spec.cells(), 0.0);
  grid.radiation_pressure[grid.index(3, 1)] = 1.0;
  grid.radiation_pressure[grid.index(1, 2)] = 1.0;
  CHECK(focal_metrics(grid).peak_i == 1);

  grid.spec.nu = 2;
  CHECK_THROWS_AS(focal_metrics(grid), InvalidArgument);
}

TEST_CASE("property: linearity in amplitude") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AcousticField f(random_cloud(rng, 64));
  for (int trial = 0; trial < 50; ++trial) {
    DriveVector d = DriveVector::uniform(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      d.phases[i] = kTwoPi * u(rng);
      d.amplitudes[i] = 0.5 * u(rng);
    }
    const double s = 2.0 * u(rng);
    DriveVector scaled = d;
    for (double& a : scaled.amplitudes) a *= s;
    const Vec3 p(0.1 * (u(rng) - 0.5), 0.1 * (u(rng) - 0.5), 0.1 + 0.2 * u(rng));
    const Complex base = f.pressure_at(d, p);
    const Complex sc = f.pressure_at(scaled, p);
    CHECK(std::abs(sc - s * base) <= 1e-12 * std::abs(s * base));
    CHECK(f.radiation_pressure(sc) == doctest::Approx(s * s * f.radiation_pressure(base)).epsilon(1e-12));
  }
}

TEST_CASE("property: focused phases beat random phases") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AcousticField f(random_cloud(rng, 32));
  const Vec3 focus(0.0, 0.01, 0.12);
  const double focused = std::abs(f.pressure_at(f.focus_phases(focus), focus));
  DriveVector d = DriveVector::uniform(f.size());
  for (int trial = 0; trial < 1000; ++trial) {
    for (double& ph : d.phases) ph = kTwoPi * u(rng);
    CHECK(std::abs(f.pressure_at(d, focus)) <= focused);
  }
}

TEST_CASE("property: focus phases are invariant to whole-wavelength shifts") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> shift(1, 12);
  const AcousticField base(random_cloud(rng, 24));
  const Vec3 focus(0.01, 0.0, 0.2);
  const double lambda = base.array().wavelength();
  std::vector<Vec3> pos, nrm;
  for (const auto& t : base.array().transducers()) {
    const Vec3 away = (t.position - focus).normalized();
    pos.push_back(t.position + shift(rng) * lambda * away);
    nrm.push_back(t.normal);
  }
  const AcousticField moved(ArrayModel::from_points(pos, nrm));
  const auto a = base.focus_phases(focus);
  const auto b = moved.focus_phases(focus);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(circular_distance(a.phases[i], b.phases[i]) <= 1e-9);
}
