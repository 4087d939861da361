#include "tapsim/config.hpp"

#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace tapsim::io {
namespace {

using nlohmann::json;

std::string locate(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Strict view of one JSON object: typed getters with defaults and a
/// whitelist check so typos surface as errors.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  void only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (auto k : keys) known = known || key == k;
      if (!known) throw ConfigError(locate(path_, key), "unknown key");
    }
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }
  [[nodiscard]] const json& raw(const std::string& key) const { return j_.at(key); }
  [[nodiscard]] std::string path(const std::string& key) const { return locate(path_, key); }
  [[nodiscard]] const std::string& where() const { return path_; }

  [[nodiscard]] double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    return v.get<double>();
  }

  [[nodiscard]] int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v.get<int>();
  }

  [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  [[nodiscard]] std::vector<double> numbers(const std::string& key, std::size_t count) const {
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != count) {
      throw ConfigError(path(key), "expected an array of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(path(key), "expected an array of " + std::to_string(count) + " numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  [[nodiscard]] Section child(const std::string& key) const { return Section(j_.at(key), path(key)); }

 private:
  const json& j_;
  std::string path_;
};

template <typename F>
void guarded(const std::string& path, F&& check) {
  try {
    check();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    int line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(what, "parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                                ": " + e.what(),
                      line, column);
  }
}

std::string read_file(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(what, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

modulation::Vec2 read_axis(const Section& s, const std::string& key, const modulation::Vec2& fallback) {
  if (!s.has(key)) return fallback;
  const auto v = s.numbers(key, 2);
  const modulation::Vec2 axis(v[0], v[1]);
  if (axis.norm() == 0.0) throw ConfigError(s.path(key), "axis must be non-zero");
  return axis.normalized();
}

RigSpec parse_rig(const Section& s) {
  s.only({"carrier_frequency_hz", "sound_speed_m_s", "units"});
  RigSpec rig;
  rig.carrier_frequency = s.number("carrier_frequency_hz", rig.carrier_frequency);
  rig.sound_speed = s.number("sound_speed_m_s", rig.sound_speed);
  if (!(rig.carrier_frequency > 0.0)) throw ConfigError(s.path("carrier_frequency_hz"), "must be positive");
  if (!(rig.sound_speed > 0.0)) throw ConfigError(s.path("sound_speed_m_s"), "must be positive");

  if (s.has("units")) {
    const auto& arr = s.raw("units");
    if (!arr.is_array() || arr.empty()) throw ConfigError(s.path("units"), "expected a non-empty array");
    rig.units.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Section u(arr[i], s.path("units") + "[" + std::to_string(i) + "]");
      u.only({"rows", "cols", "pitch_mm", "translation_mm", "rotation_axis_angle_deg"});
      geometry::PlacedUnit placed;
      const int rows = u.integer("rows", geometry::kDefaultUnitRows);
      const int cols = u.integer("cols", geometry::kDefaultUnitCols);
      const double pitch = u.number("pitch_mm", geometry::kDefaultPitch * 1e3) * 1e-3;
      guarded(u.path("pitch_mm"), [&] { placed.layout = geometry::build_unit(rows, cols, pitch); });
      if (u.has("translation_mm")) {
        const auto t = u.numbers("translation_mm", 3);
        placed.pose.translation = geometry::Vec3(t[0], t[1], t[2]) * 1e-3;
      }
      if (u.has("rotation_axis_angle_deg")) {
        const auto r = u.numbers("rotation_axis_angle_deg", 4);
        const geometry::Vec3 axis(r[0], r[1], r[2]);
        guarded(u.path("rotation_axis_angle_deg"), [&] {
          placed.pose = geometry::UnitPose::from_axis_angle(axis, r[3] * std::numbers::pi / 180.0,
                                                            placed.pose.translation);
          geometry::validate_pose(placed.pose);
        });
      }
      rig.units.push_back(std::move(placed));
    }
  }
  return rig;
}

tap::Scene parse_scene(const Section& s) {
  s.only({"objects"});
  if (!s.has("objects")) return tap::default_scene();
  const auto& arr = s.raw("objects");
  if (!arr.is_array() || arr.empty()) throw ConfigError(s.path("objects"), "expected a non-empty array");
  tap::Scene scene;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Section o(arr[i], s.path("objects") + "[" + std::to_string(i) + "]");
    o.only({"id", "rect_mm", "color", "material"});
    if (!o.has("id")) throw ConfigError(o.path("id"), "required");
    if (!o.has("rect_mm")) throw ConfigError(o.path("rect_mm"), "required");
    tap::VirtualObject obj;
    obj.id = o.integer("id", 0);
    const auto r = o.numbers("rect_mm", 4);
    obj.region = tap::Rect{r[0] * 1e-3, r[1] * 1e-3, r[2] * 1e-3, r[3] * 1e-3};
    guarded(o.path("color"), [&] { obj.color = tap::parse_color(o.text("color", "")); });
    guarded(o.path("material"), [&] {
      obj.material = o.has("material")
                         ? tap::parse_material(o.text("material", ""))
                         : (obj.color == tap::DisplayColor::red ? tap::Material::am_balloon : tap::Material::lm_cymbal);
    });
    guarded(o.where(), [&] { obj.validate(); });
    scene.push_back(obj);
  }
  guarded(s.path("objects"), [&] { tap::validate_scene(scene); });
  return scene;
}

tap::MaterialProfiles parse_profiles(const Section& s) {
  s.only({"am_balloon", "lm_cymbal", "stationary"});
  tap::MaterialProfiles prof;
  if (s.has("am_balloon")) {
    const auto a = s.child("am_balloon");
    a.only({"f_am_hz", "tau_ms", "t_att_ms", "a_max"});
    auto& p = prof.balloon;
    p.f_am = a.number("f_am_hz", p.f_am);
    p.tau = a.number("tau_ms", p.tau * 1e3) * 1e-3;
    p.t_att = a.number("t_att_ms", p.t_att * 1e3) * 1e-3;
    p.a_max = a.number("a_max", p.a_max);
    guarded(s.path("am_balloon"), [&] { p.validate(); });
  }
  if (s.has("lm_cymbal")) {
    const auto l = s.child("lm_cymbal");
    l.only({"f_lm_hz", "size_max_mm", "size_min_mm", "tau_ms", "t_att_ms", "a_max", "axis"});
    auto& p = prof.cymbal;
    p.f_lm = l.number("f_lm_hz", p.f_lm);
    p.size_max = l.number("size_max_mm", p.size_max * 1e3) * 1e-3;
    p.size_min = l.number("size_min_mm", p.size_min * 1e3) * 1e-3;
    p.tau = l.number("tau_ms", p.tau * 1e3) * 1e-3;
    p.t_att = l.number("t_att_ms", p.t_att * 1e3) * 1e-3;
    p.a_max = l.number("a_max", p.a_max);
    p.axis = read_axis(l, "axis", p.axis);
    guarded(s.path("lm_cymbal"), [&] { p.validate(); });
  }
  if (s.has("stationary")) {
    const auto st = s.child("stationary");
    st.only({"f_lm_hz", "size_mm", "a_max", "axis"});
    const modulation::StationaryLmParams d;
    const double f = st.number("f_lm_hz", d.f_lm());
    const double size = st.number("size_mm", d.size() * 1e3) * 1e-3;
    const double a_max = st.number("a_max", d.a_max());
    const auto axis = read_axis(st, "axis", d.axis());
    guarded(s.path("stationary"), [&] { prof.stationary = modulation::StationaryLmParams(f, size, a_max, axis); });
  }
  return prof;
}

template <typename T, typename Parse>
T inline_or_file(const Section& root, const std::string& key, const std::filesystem::path& base_dir, Parse parse) {
  const auto& v = root.raw(key);
  if (v.is_string()) {
    const auto file = base_dir / v.get<std::string>();
    const json doc = parse_json(read_file(file, root.path(key)), root.path(key) + " (" + file.string() + ")");
    return parse(Section(doc, root.path(key)));
  }
  return parse(root.child(key));
}

}  // namespace

ConfigError::ConfigError(std::string path, const std::string& message, std::optional<int> line,
                         std::optional<int> column)
    : InvalidArgument(path + ": " + message), path_(std::move(path)), line_(line), column_(column) {}

geometry::ArrayModel AppConfig::build_array() const {
  return geometry::assemble_rig(rig.units, rig.carrier_frequency, rig.sound_speed);
}

field::AcousticField AppConfig::build_field() const {
  return field::AcousticField(build_array(), field);
}

AppConfig load_config(std::string_view text, const std::filesystem::path& base_dir) {
  const json doc = parse_json(text, "<config>");
  const Section root(doc, "");
  root.only({"rig", "field", "scene", "profiles", "session", "control_rate_hz", "wire_rate_hz", "z_panel_mm",
             "phase_bits"});

  AppConfig cfg;
  if (root.has("rig")) cfg.rig = inline_or_file<RigSpec>(root, "rig", base_dir, parse_rig);
  if (root.has("scene")) cfg.scene = inline_or_file<tap::Scene>(root, "scene", base_dir, parse_scene);
  if (root.has("profiles")) cfg.profiles = parse_profiles(root.child("profiles"));

  if (root.has("field")) {
    const auto f = root.child("field");
    f.only({"directivity", "piston_radius_mm", "p_ref_pa", "air_density_kg_m3"});
    const auto mode = f.text("directivity", "piston");
    if (mode == "piston") {
      cfg.field.directivity = field::Directivity::piston;
    } else if (mode == "omni") {
      cfg.field.directivity = field::Directivity::omni;
    } else {
      throw ConfigError(f.path("directivity"), "expected \"piston\" or \"omni\"");
    }
    cfg.field.piston_radius = f.number("piston_radius_mm", cfg.field.piston_radius * 1e3) * 1e-3;
    cfg.field.p_ref = f.number("p_ref_pa", cfg.field.p_ref);
    cfg.field.air_density = f.number("air_density_kg_m3", cfg.field.air_density);
    if (!(cfg.field.piston_radius > 0.0)) throw ConfigError(f.path("piston_radius_mm"), "must be positive");
    if (!(cfg.field.p_ref > 0.0)) throw ConfigError(f.path("p_ref_pa"), "must be positive");
    if (!(cfg.field.air_density > 0.0)) throw ConfigError(f.path("air_density_kg_m3"), "must be positive");
  }

  if (root.has("session")) {
    const auto s = root.child("session");
    s.only({"anchor_mode", "min_gap_ms", "jitter_buffer_ms"});
    const auto mode = s.text("anchor_mode", "frozen");
    if (mode == "frozen") {
      cfg.session.anchor_mode = tap::AnchorMode::frozen;
    } else if (mode == "follow") {
      cfg.session.anchor_mode = tap::AnchorMode::follow;
    } else {
      throw ConfigError(s.path("anchor_mode"), "expected \"frozen\" or \"follow\"");
    }
    cfg.session.min_gap = s.number("min_gap_ms", 0.0) * 1e-3;
    cfg.jitter_buffer = s.number("jitter_buffer_ms", cfg.jitter_buffer * 1e3) * 1e-3;
    if (!(cfg.session.min_gap >= 0.0)) throw ConfigError(s.path("min_gap_ms"), "must be >= 0");
    if (!(cfg.jitter_buffer >= 0.0)) throw ConfigError(s.path("jitter_buffer_ms"), "must be >= 0");
  }

  cfg.control_rate = root.number("control_rate_hz", cfg.control_rate);
  cfg.wire_rate = root.number("wire_rate_hz", cfg.wire_rate);
  cfg.z_panel = root.number("z_panel_mm", cfg.z_panel * 1e3) * 1e-3;
  cfg.phase_bits = root.integer("phase_bits", cfg.phase_bits);
  if (!(cfg.control_rate > 0.0)) throw ConfigError("control_rate_hz", "must be positive");
  if (!(cfg.wire_rate > 0.0 && cfg.wire_rate <= cfg.control_rate)) {
    throw ConfigError("wire_rate_hz", "must lie in (0, control_rate_hz]");
  }
  if (!(cfg.z_panel >= field::kMinDistance)) throw ConfigError("z_panel_mm", "must be at least 1 mm");
  if (cfg.phase_bits < 0 || cfg.phase_bits > 16) throw ConfigError("phase_bits", "must lie in [0, 16]");

  guarded("rig", [&] { (void)cfg.build_array(); });
  return cfg;
}

AppConfig load_config_file(const std::filesystem::path& path) {
  return load_config(read_file(path, "<config>"), path.parent_path());
}

RigSpec load_rig(std::string_view text) {
  const json doc = parse_json(text, "<rig>");
  return parse_rig(Section(doc, ""));
}

tap::Scene load_scene(std::string_view text) {
  const json doc = parse_json(text, "<scene>");
  return parse_scene(Section(doc, ""));
}

}  // namespace tapsim::io
