#include "tapsim/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tapsim/digest.hpp"
#include "tapsim/drive_frame.hpp"
#include "tapsim/field_export.hpp"
#include "tapsim/formats.hpp"
#include "tapsim/modulation.hpp"
#include "tapsim/session_server.hpp"
#include "tapsim/text_format.hpp"

namespace tapsim::io {
namespace {

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || token.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v)) {
      throw UsageError(std::string(what) + ": '" + token + "' is not a number");
    }
    values.push_back(v);
  }
  if (values.size() != expected) {
    throw UsageError(std::string(what) + " expects " + std::to_string(expected) + " comma-separated values");
  }
  return values;
}

// Writes through a string so a failed open leaves no partial file behind.
void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const std::string& suffix) {
  return prefix.string() + suffix;
}

std::string optional_mm(const std::optional<double>& v) {
  return v ? format_g9(*v * 1e3) : std::string("none");
}

modulation::Profile pick_profile(const AppConfig& config, const std::string& method) {
  if (method == "am") return config.profiles.balloon;
  if (method == "lm") return config.profiles.cymbal;
  if (method == "stationary") return config.profiles.stationary;
  throw UsageError("unknown method '" + method + "' (expected am, lm or stationary)");
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const EmptyTrace& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

field::Vec3 parse_focus_mm(const std::string& text) {
  const auto v = split_numbers(text, 3, "--focus");
  return field::Vec3(v[0], v[1], v[2]) * 1e-3;
}

GridArgs parse_grid(const std::string& text) {
  const auto v = split_numbers(text, 3, "--grid");
  if (v[0] < 1 || v[1] < 1 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) || !(v[2] > 0.0)) {
    throw UsageError("--grid needs positive integer counts and a positive spacing");
  }
  return {static_cast<int>(v[0]), static_cast<int>(v[1]), v[2] * 1e-3};
}

AppConfig resolve_config(const std::optional<std::filesystem::path>& path) {
  if (path) return load_config_file(*path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
    return load_config_file(env);
  }
  return AppConfig{};
}

int cmd_field(const AppConfig& config, const FieldArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const field::Vec3 focus = args.focus.value_or(field::Vec3(0.0, 0.0, config.z_panel));
    const auto spec = field::GridSpec::centered(focus, field::Vec3::UnitX(), field::Vec3::UnitY(), args.grid.nu,
                                                args.grid.nv, args.grid.spacing);
    try {
      spec.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    const auto acoustic = config.build_field();
    auto drive = acoustic.focus_phases(focus);
    if (config.phase_bits > 0) drive = field::quantize_phases(drive, config.phase_bits);
    const auto grid = acoustic.sample_grid(drive, spec);
    const auto metrics = field::focal_metrics(grid);

    std::ostringstream csv;
    field::write_field_csv(csv, grid);
    std::ostringstream pgm;
    field::write_field_pgm(pgm, grid);
    const auto csv_path = with_suffix(args.out, ".csv");
    const auto pgm_path = with_suffix(args.out, ".pgm");
    write_file(csv_path, csv.str());
    write_file(pgm_path, pgm.str());

    out << "elements: " << acoustic.size() << '\n'
        << "focus_mm: " << format_g9(focus.x() * 1e3) << ',' << format_g9(focus.y() * 1e3) << ','
        << format_g9(focus.z() * 1e3) << '\n'
        << "phase_bits: " << config.phase_bits << '\n'
        << "peak_radiation_Pa: " << format_g9(metrics.peak_value) << '\n'
        << "peak_mm: " << format_g9(metrics.peak_location.x() * 1e3) << ','
        << format_g9(metrics.peak_location.y() * 1e3) << ',' << format_g9(metrics.peak_location.z() * 1e3) << '\n'
        << "fwhm_u_mm: " << optional_mm(metrics.fwhm_u) << '\n'
        << "fwhm_v_mm: " << optional_mm(metrics.fwhm_v) << '\n'
        << "wrote: " << csv_path.string() << ' ' << pgm_path.string() << '\n';
    return kExitOk;
  });
}

int cmd_profile(const AppConfig& config, const ProfileArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto profile = pick_profile(config, args.method);
    const double rate = args.rate.value_or(config.control_rate);
    modulation::FrameSeries series;
    try {
      series = modulation::sample_profile(profile, rate, args.duration);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    std::ostringstream csv;
    modulation::write_waveform_csv(csv, series);
    if (args.out.empty()) {
      out << csv.str();
    } else {
      write_file(args.out, csv.str());
    }
    return kExitOk;
  });
}

int cmd_replay(const AppConfig& config, const ReplayArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.trace.empty()) throw UsageError("replay needs --trace PATH");
    std::ifstream in(args.trace, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace " + args.trace.string());
    std::vector<tap::FingerState> trace;
    try {
      trace = read_trace_csv(in);
    } catch (const TraceError& e) {
      throw std::runtime_error(args.trace.string() + ": " + e.what());
    }
    const double rate = args.rate.value_or(config.control_rate);
    const auto result = tap::render_trace(trace, config.scene, rate, config.profiles, config.session);

    std::ostringstream frames_csv;
    write_frames_csv(frames_csv, result.frames, config.z_panel);
    std::ostringstream phases_csv;
    write_phase_log_csv(phases_csv, result.log);
    const auto frames_path = with_suffix(args.out, "_frames.csv");
    const auto phases_path = with_suffix(args.out, "_phases.csv");
    write_file(frames_path, frames_csv.str());
    write_file(phases_path, phases_csv.str());

    std::string digest_input = frames_csv.str() + phases_csv.str();
    if (args.drive_frames) {
      const auto acoustic = config.build_field();
      std::vector<DriveFrame> drives;
      drives.reserve(result.frames.size());
      for (const auto& f : result.frames) {
        drives.push_back(compose_drive_frame(acoustic, f, config.z_panel, config.phase_bits));
      }
      std::ostringstream drive_csv;
      write_drive_frames_csv(drive_csv, drives, config.phase_bits);
      write_file(with_suffix(args.out, "_drive.csv"), drive_csv.str());
      digest_input += drive_csv.str();
    }

    out << "frames: " << result.frames.size() << '\n' << "transitions: " << result.log.size() << '\n';
    for (const auto& tr : result.log) {
      out << "  " << format_g9(tr.t) << ' ' << tap::to_string(tr.from) << " -> " << tap::to_string(tr.to);
      if (tr.object_id) out << " object " << *tr.object_id;
      out << '\n';
    }
    out << "content-" << kDigestName << ": " << sha256_hex(digest_input) << '\n';
    return kExitOk;
  });
}

int cmd_serve(const AppConfig& config, const ServeArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ServerOptions options;
    options.bind_address = args.bind_address;
    options.port = args.port;
    options.static_root = args.static_root;
    SessionServer server(config, options);
    out << "listening on ws://" << args.bind_address << ':' << server.port() << "/\n" << std::flush;
    server.run();
    return kExitOk;
  });
}

}  // namespace tapsim::io
