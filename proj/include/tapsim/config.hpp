#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tapsim/error.hpp"
#include "tapsim/field.hpp"
#include "tapsim/geometry.hpp"
#include "tapsim/tap_engine.hpp"

namespace tapsim::io {

/// Environment variable naming the config file used when --config is absent.
inline constexpr const char* kConfigEnvVar = "TAPSIM_CONFIG";

/// Config rejection. `path` is the dotted field path (e.g.
/// "profiles.stationary.f_lm_hz"); line/column are set for syntax errors.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string path, const std::string& message, std::optional<int> line = {},
              std::optional<int> column = {});

  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] std::optional<int> line() const { return line_; }
  [[nodiscard]] std::optional<int> column() const { return column_; }

 private:
  std::string path_;
  std::optional<int> line_;
  std::optional<int> column_;
};

struct RigSpec {
  std::vector<geometry::PlacedUnit> units = geometry::default_rig_units();
  double carrier_frequency = geometry::kDefaultCarrierFrequency;
  double sound_speed = geometry::kDefaultSoundSpeed;
};

struct AppConfig {
  RigSpec rig;
  field::FieldModel field;
  tap::Scene scene = tap::default_scene();
  tap::MaterialProfiles profiles;
  tap::SessionOptions session;
  double control_rate = 1000.0;  // Hz
  double wire_rate = 60.0;       // Hz, StateUpdate messages
  double jitter_buffer = 0.020;  // s, live tick lag behind the client clock
  double z_panel = 0.200;        // m
  int phase_bits = 8;            // 0 = continuous

  [[nodiscard]] geometry::ArrayModel build_array() const;
  [[nodiscard]] field::AcousticField build_field() const;
};

/// Parses and validates a JSON config. String values for "rig" or "scene"
/// name separate files, resolved against `base_dir`.
AppConfig load_config(std::string_view text, const std::filesystem::path& base_dir = {});
AppConfig load_config_file(const std::filesystem::path& path);

/// Standalone rig / scene documents (the same schema as the inline sections).
RigSpec load_rig(std::string_view text);
tap::Scene load_scene(std::string_view text);

}  // namespace tapsim::io
