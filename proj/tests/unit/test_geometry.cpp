#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tapsim/error.hpp"
#include "tapsim/geometry.hpp"

using namespace tapsim;
using namespace tapsim::geometry;

namespace {

UnitPose random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec3 axis(u(rng), u(rng), u(rng));
  if (axis.norm() < 1e-3) axis = Vec3::UnitZ();
  return UnitPose::from_axis_angle(axis, std::numbers::pi * u(rng), Vec3(u(rng), u(rng), u(rng)) * 0.5);
}

}  // namespace

TEST_CASE("build_unit degenerate grid") {
  const auto unit = build_unit(1, 1, 0.01016);
  REQUIRE(unit.size() == 1);
  CHECK(unit.positions[0].isZero(0.0));
  CHECK(unit.normal == Vec3::UnitZ());
}

TEST_CASE("build_unit default layout") {
  const auto unit = build_unit(18, 14, 0.01016);
  REQUIRE(unit.size() == 252);
  double xmin = 1e9, xmax = -1e9;
  for (const auto& p : unit.positions) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    CHECK(p.z() == 0.0);
  }
  CHECK(xmax - xmin == doctest::Approx(0.17272).epsilon(1e-12));

  // row-major: neighbours within a row differ by pitch along y, rows by pitch along x
  for (int r = 0; r < 18; ++r) {
    for (int c = 0; c + 1 < 14; ++c) {
      const auto& a = unit.positions[static_cast<std::size_t>(r * 14 + c)];
      const auto& b = unit.positions[static_cast<std::size_t>(r * 14 + c + 1)];
      CHECK(std::abs((b - a).norm() - 0.01016) <= 1e-12);
    }
  }
  for (int r = 0; r + 1 < 18; ++r) {
    const auto& a = unit.positions[static_cast<std::size_t>(r * 14)];
    const auto& b = unit.positions[static_cast<std::size_t>((r + 1) * 14)];
    CHECK(std::abs((b - a).x() - 0.01016) <= 1e-12);
  }
}

TEST_CASE("build_unit 2x2 symmetric about origin") {
  const auto unit = build_unit(2, 2, 0.01);
  REQUIRE(unit.size() == 4);
  for (const auto& p : unit.positions) {
    CHECK(std::abs(std::abs(p.x()) - 0.005) <= 1e-15);
    CHECK(std::abs(std::abs(p.y()) - 0.005) <= 1e-15);
  }
}

TEST_CASE("build_unit rejects bad dimensions") {
  CHECK_THROWS_AS(build_unit(0, 3, 0.01), InvalidArgument);
  CHECK_THROWS_AS(build_unit(3, -1, 0.01), InvalidArgument);
  CHECK_THROWS_AS(build_unit(3, 3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_unit(3, 3, -0.01), InvalidArgument);
}

TEST_CASE("assemble_rig identity pose keeps local positions") {
  const auto unit = build_unit(18, 14, kDefaultPitch);
  const auto rig = assemble_rig({{unit, UnitPose{}}});
  REQUIRE(rig.size() == 252);
  for (std::size_t i = 0; i < rig.size(); ++i) {
    CHECK(rig.transducers()[i].position == unit.positions[i]);
    CHECK(rig.transducers()[i].local == i);
    CHECK(rig.transducers()[i].unit == 0);
  }
  CHECK(rig.wavelength() == doctest::Approx(343.0 / 40000.0));
}

TEST_CASE("default rig has six units of 252") {
  const auto rig = default_rig();
  CHECK(rig.units().size() == 6);
  CHECK(rig.size() == 1512);
  for (const auto& t : rig.transducers()) {
    CHECK(std::abs(t.normal.norm() - 1.0) <= 1e-9);
    CHECK(t.position.z() == 0.0);
  }
  // zero gap: the tiled rig is a uniform 54 x 28 lattice centered on the origin
  double sx = 0.0, sy = 0.0;
  for (const auto& t : rig.transducers()) {
    sx += t.position.x();
    sy += t.position.y();
  }
  CHECK(std::abs(sx) < 1e-9);
  CHECK(std::abs(sy) < 1e-9);
}

TEST_CASE("unit rotated 180 degrees about x faces down") {
  const auto pose = UnitPose::from_axis_angle(Vec3::UnitX(), std::numbers::pi);
  const auto rig = assemble_rig({{build_unit(3, 3, 0.01), pose}});
  for (const auto& t : rig.transducers()) {
    CHECK((t.normal - Vec3(0, 0, -1)).norm() <= 1e-12);
  }
}

TEST_CASE("assemble_rig errors") {
  CHECK_THROWS_AS(assemble_rig({}), InvalidArgument);
  UnitPose skew;
  skew.rotation(0, 1) = 0.1;
  CHECK_THROWS_AS(assemble_rig({{build_unit(2, 2, 0.01), skew}}), InvalidArgument);
  UnitPose mirror;
  mirror.rotation(2, 2) = -1.0;  // orthonormal but improper
  CHECK_THROWS_AS(assemble_rig({{build_unit(2, 2, 0.01), mirror}}), InvalidArgument);
}

TEST_CASE("local_to_world examples") {
  CHECK(local_to_world(UnitPose{}, Vec3(1, 2, 3)) == Vec3(1, 2, 3));
  UnitPose lifted;
  lifted.translation = Vec3(0, 0, 0.2);
  CHECK(local_to_world(lifted, Vec3::Zero()) == Vec3(0, 0, 0.2));
  const auto quarter = UnitPose::from_axis_angle(Vec3::UnitZ(), std::numbers::pi / 2);
  CHECK((local_to_world(quarter, Vec3(1, 0, 0)) - Vec3(0, 1, 0)).norm() <= 1e-12);
}

TEST_CASE("property: world/local round trip and rigid distances") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  const auto unit = build_unit(4, 3, 0.01);
  for (int trial = 0; trial < 500; ++trial) {
    const auto pose = random_pose(rng);
    const Vec3 p(u(rng), u(rng), u(rng));
    CHECK((world_to_local(pose, local_to_world(pose, p)) - p).norm() <= 1e-12);

    if (trial % 25 == 0) {
      const auto rig = assemble_rig({{unit, pose}});
      for (std::size_t a = 0; a < unit.size(); ++a) {
        for (std::size_t b = a + 1; b < unit.size(); ++b) {
          const double local = (unit.positions[a] - unit.positions[b]).norm();
          const double world = (rig.transducers()[a].position - rig.transducers()[b].position).norm();
          CHECK(std::abs(local - world) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("property: assembly is deterministic to the byte") {
  const auto a = default_rig();
  const auto b = default_rig();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ta = a.transducers()[i];
    const auto& tb = b.transducers()[i];
    CHECK(std::memcmp(ta.position.data(), tb.position.data(), sizeof(double) * 3) == 0);
    CHECK(std::memcmp(ta.normal.data(), tb.normal.data(), sizeof(double) * 3) == 0);
    CHECK(ta.unit == tb.unit);
    CHECK(ta.local == tb.local);
  }
}
