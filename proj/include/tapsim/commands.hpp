#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "tapsim/config.hpp"
#include "tapsim/field.hpp"

namespace tapsim::io {

/// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Misuse of a subcommand (bad method name, empty trace, bad option value).
class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct GridArgs {
  int nu = 101;
  int nv = 101;
  double spacing = 2e-3;  // m
};

struct FieldArgs {
  std::optional<field::Vec3> focus;  // m, defaults to (0, 0, z_panel)
  GridArgs grid;
  std::filesystem::path out = "field";  // writes <out>.csv and <out>.pgm
};

struct ProfileArgs {
  std::string method = "am";
  std::optional<double> rate;  // Hz, defaults to the control rate
  double duration = 0.2;       // s
  std::filesystem::path out;   // stdout when empty
};

struct ReplayArgs {
  std::filesystem::path trace;
  std::filesystem::path out = "replay";  // <out>_frames.csv, <out>_phases.csv
  std::optional<double> rate;            // Hz, defaults to the control rate
  bool drive_frames = false;             // also write <out>_drive.csv
};

struct ServeArgs {
  std::string bind_address = "127.0.0.1";
  unsigned short port = 8765;
  std::filesystem::path static_root;
};

/// Each command reports results on `out` and problems on `err` and returns
/// an exit code; they do not throw for user-facing failures.
int cmd_field(const AppConfig& config, const FieldArgs& args, std::ostream& out, std::ostream& err);
int cmd_profile(const AppConfig& config, const ProfileArgs& args, std::ostream& out, std::ostream& err);
int cmd_replay(const AppConfig& config, const ReplayArgs& args, std::ostream& out, std::ostream& err);
int cmd_serve(const AppConfig& config, const ServeArgs& args, std::ostream& out, std::ostream& err);

/// "X,Y,Z" in millimetres -> metres.
field::Vec3 parse_focus_mm(const std::string& text);
/// "NU,NV,SPACING" with spacing in millimetres.
GridArgs parse_grid(const std::string& text);

/// Config from an explicit path, else the file named by TAPSIM_CONFIG,
/// else built-in defaults.
AppConfig resolve_config(const std::optional<std::filesystem::path>& path);

}  // namespace tapsim::io
