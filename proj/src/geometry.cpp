#include "tapsim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tapsim/error.hpp"

namespace tapsim::geometry {

UnitPose UnitPose::from_axis_angle(const Vec3& axis, double angle_rad, const Vec3& translation) {
  if (axis.norm() == 0.0) {
    throw InvalidArgument("rotation axis must be non-zero");
  }
  UnitPose pose;
  pose.translation = translation;
  pose.rotation = Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
  return pose;
}

double ArrayModel::wavenumber() const {
  return 2.0 * std::numbers::pi / wavelength();
}

ArrayModel ArrayModel::from_points(const std::vector<Vec3>& positions,
                                   const std::vector<Vec3>& normals,
                                   double carrier_frequency, double sound_speed) {
  if (positions.size() != normals.size()) {
    throw InvalidArgument("positions and normals differ in length");
  }
  std::vector<PlacedUnit> units;
  units.reserve(positions.size());
  const UnitLayout single = build_unit(1, 1, kDefaultPitch);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (normals[i].norm() == 0.0) {
      throw InvalidArgument("transducer " + std::to_string(i) + " has a zero normal");
    }
    UnitPose pose;
    pose.translation = positions[i];
    pose.rotation =
        Eigen::Quaterniond::FromTwoVectors(Vec3::UnitZ(), normals[i].normalized()).toRotationMatrix();
    units.push_back({single, pose});
  }
  return assemble_rig(std::move(units), carrier_frequency, sound_speed);
}

UnitLayout build_unit(int rows, int cols, double pitch) {
  if (rows < 1 || cols < 1) {
    throw InvalidArgument("unit grid needs rows >= 1 and cols >= 1");
  }
  if (!(pitch > 0.0) || !std::isfinite(pitch)) {
    throw InvalidArgument("unit pitch must be positive");
  }
  UnitLayout layout;
  layout.rows = rows;
  layout.cols = cols;
  layout.pitch = pitch;
  layout.positions.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  const double cx = 0.5 * (rows - 1);
  const double cy = 0.5 * (cols - 1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      layout.positions.emplace_back((r - cx) * pitch, (c - cy) * pitch, 0.0);
    }
  }
  return layout;
}

void validate_pose(const UnitPose& pose) {
  constexpr double tol = 1e-9;
  const Mat3& r = pose.rotation;
  if (!r.allFinite() || !pose.translation.allFinite()) {
    throw InvalidArgument("pose contains non-finite values");
  }
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) {
    throw InvalidArgument("pose rotation is not orthonormal");
  }
  if (std::abs(r.determinant() - 1.0) > tol) {
    throw InvalidArgument("pose rotation must have determinant +1");
  }
}

ArrayModel assemble_rig(std::vector<PlacedUnit> units, double carrier_frequency, double sound_speed) {
  if (units.empty()) {
    throw InvalidArgument("rig needs at least one unit");
  }
  if (!(carrier_frequency > 0.0) || !(sound_speed > 0.0)) {
    throw InvalidArgument("carrier frequency and sound speed must be positive");
  }
  ArrayModel model;
  model.carrier_frequency_ = carrier_frequency;
  model.sound_speed_ = sound_speed;

  std::size_t total = 0;
  for (std::size_t u = 0; u < units.size(); ++u) {
    try {
      validate_pose(units[u].pose);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("unit " + std::to_string(u) + ": " + e.what());
    }
    total += units[u].layout.size();
  }

  model.transducers_.reserve(total);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& [layout, pose] = units[u];
    const Vec3 normal = (pose.rotation * layout.normal).normalized();
    for (std::size_t i = 0; i < layout.positions.size(); ++i) {
      model.transducers_.push_back({local_to_world(pose, layout.positions[i]), normal, u, i});
    }
  }
  model.units_ = std::move(units);
  return model;
}

Vec3 local_to_world(const UnitPose& pose, const Vec3& p_local) {
  return pose.rotation * p_local + pose.translation;
}

Vec3 world_to_local(const UnitPose& pose, const Vec3& p_world) {
  return pose.rotation.transpose() * (p_world - pose.translation);
}

std::vector<PlacedUnit> default_rig_units() {
  const UnitLayout unit = build_unit(kDefaultUnitRows, kDefaultUnitCols, kDefaultPitch);
  const double width = kDefaultUnitRows * kDefaultPitch;
  const double depth = kDefaultUnitCols * kDefaultPitch;
  std::vector<PlacedUnit> units;
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 3; ++col) {
      UnitPose pose;
      pose.translation = Vec3((col - 1) * width, (row - 0.5) * depth, 0.0);
      units.push_back({unit, pose});
    }
  }
  return units;
}

ArrayModel default_rig() {
  return assemble_rig(default_rig_units());
}

}  // namespace tapsim::geometry
