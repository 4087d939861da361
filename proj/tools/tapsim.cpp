#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tapsim/commands.hpp"

using namespace tapsim::io;

int main(int argc, char** argv) {
  CLI::App app{"Mid-air tap feedback simulator"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "Config file (default: $TAPSIM_CONFIG, then built-in defaults)");

  FieldArgs field_args;
  std::string focus_text;
  std::string grid_text;
  std::string field_out = "field";
  auto* field_cmd = app.add_subcommand("field", "Sample the focused field on a plane; writes OUT.csv and OUT.pgm");
  field_cmd->add_option("--focus", focus_text, "Focus X,Y,Z in mm (default 0,0,z_panel)");
  field_cmd->add_option("--grid", grid_text, "NU,NV,SPACING with spacing in mm (default 101,101,2)");
  field_cmd->add_option("--out", field_out, "Output prefix");

  ProfileArgs profile_args;
  std::string profile_out;
  std::optional<double> profile_rate;
  auto* profile_cmd = app.add_subcommand("profile", "Emit a modulation waveform CSV");
  profile_cmd->add_option("--method", profile_args.method, "am, lm or stationary");
  profile_cmd->add_option("--rate", profile_rate, "Sample rate in Hz (default: control rate)");
  profile_cmd->add_option("--duration", profile_args.duration, "Seconds");
  profile_cmd->add_option("--out", profile_out, "Output file (default stdout)");

  ReplayArgs replay_args;
  std::string trace_path;
  std::string replay_out = "replay";
  std::optional<double> replay_rate;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a finger trace offline");
  replay_cmd->add_option("--trace", trace_path, "Trace CSV (t_s,x_mm,y_mm,down)")->required();
  replay_cmd->add_option("--out", replay_out, "Output prefix");
  replay_cmd->add_option("--rate", replay_rate, "Frame rate in Hz (default: control rate)");
  replay_cmd->add_flag("--drive-frames", replay_args.drive_frames, "Also write per-element drive frames");

  ServeArgs serve_args;
  std::string static_root;
  auto* serve_cmd = app.add_subcommand("serve", "Run the live WebSocket session service");
  serve_cmd->add_option("--port", serve_args.port, "TCP port (0 picks one)");
  serve_cmd->add_option("--bind", serve_args.bind_address, "Listen address");
  serve_cmd->add_option("--static", static_root, "Directory served over HTTP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  AppConfig config;
  try {
    std::optional<std::filesystem::path> path;
    if (config_path) path = *config_path;
    config = resolve_config(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*field_cmd) {
      if (!focus_text.empty()) field_args.focus = parse_focus_mm(focus_text);
      if (!grid_text.empty()) field_args.grid = parse_grid(grid_text);
      field_args.out = field_out;
      return cmd_field(config, field_args, std::cout, std::cerr);
    }
    if (*profile_cmd) {
      profile_args.rate = profile_rate;
      profile_args.out = profile_out;
      return cmd_profile(config, profile_args, std::cout, std::cerr);
    }
    if (*replay_cmd) {
      replay_args.trace = trace_path;
      replay_args.out = replay_out;
      replay_args.rate = replay_rate;
      return cmd_replay(config, replay_args, std::cout, std::cerr);
    }
    serve_args.static_root = static_root;
    return cmd_serve(config, serve_args, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
