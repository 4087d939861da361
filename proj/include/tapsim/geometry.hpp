#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tapsim::geometry {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kDefaultPitch = 0.01016;         // m
inline constexpr double kDefaultCarrierFrequency = 40e3;  // Hz
inline constexpr double kDefaultSoundSpeed = 343.0;       // m/s
inline constexpr int kDefaultUnitRows = 18;
inline constexpr int kDefaultUnitCols = 14;

/// Transducer grid of a single unit in its local frame. Rows run along local
/// x, columns along local y; positions are row-major and centered on the
/// unit origin in the z=0 plane. Emission axis is local +z.
struct UnitLayout {
  int rows = 0;
  int cols = 0;
  double pitch = 0.0;
  std::vector<Vec3> positions;
  Vec3 normal = Vec3::UnitZ();

  [[nodiscard]] std::size_t size() const { return positions.size(); }
};

/// Rigid placement of a unit: world = rotation * local + translation.
struct UnitPose {
  Vec3 translation = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  static UnitPose from_axis_angle(const Vec3& axis, double angle_rad,
                                  const Vec3& translation = Vec3::Zero());
};

struct PlacedUnit {
  UnitLayout layout;
  UnitPose pose;
};

struct Transducer {
  Vec3 position;
  Vec3 normal;
  std::size_t unit = 0;
  std::size_t local = 0;
};

/// Immutable world-space description of every transducer in a rig.
class ArrayModel {
 public:
  [[nodiscard]] const std::vector<PlacedUnit>& units() const { return units_; }
  [[nodiscard]] const std::vector<Transducer>& transducers() const { return transducers_; }
  [[nodiscard]] std::size_t size() const { return transducers_.size(); }
  [[nodiscard]] double carrier_frequency() const { return carrier_frequency_; }
  [[nodiscard]] double sound_speed() const { return sound_speed_; }
  [[nodiscard]] double wavelength() const { return sound_speed_ / carrier_frequency_; }
  [[nodiscard]] double wavenumber() const;

  /// Arbitrary transducer cloud, used for synthetic arrays in tests and
  /// tooling. Each transducer is its own unit of one element.
  static ArrayModel from_points(const std::vector<Vec3>& positions,
                                const std::vector<Vec3>& normals,
                                double carrier_frequency = kDefaultCarrierFrequency,
                                double sound_speed = kDefaultSoundSpeed);

 private:
  friend ArrayModel assemble_rig(std::vector<PlacedUnit>, double, double);

  std::vector<PlacedUnit> units_;
  std::vector<Transducer> transducers_;
  double carrier_frequency_ = kDefaultCarrierFrequency;
  double sound_speed_ = kDefaultSoundSpeed;
};

UnitLayout build_unit(int rows, int cols, double pitch);

/// Throws InvalidArgument unless rotation is orthonormal with det +1 (1e-9).
void validate_pose(const UnitPose& pose);

ArrayModel assemble_rig(std::vector<PlacedUnit> units,
                        double carrier_frequency = kDefaultCarrierFrequency,
                        double sound_speed = kDefaultSoundSpeed);

Vec3 local_to_world(const UnitPose& pose, const Vec3& p_local);
Vec3 world_to_local(const UnitPose& pose, const Vec3& p_world);

/// Six default units tiled coplanar, 3 along x by 2 along y, no gap between
/// footprints, centered on the world origin and emitting +z.
std::vector<PlacedUnit> default_rig_units();
ArrayModel default_rig();

}  // namespace tapsim::geometry
