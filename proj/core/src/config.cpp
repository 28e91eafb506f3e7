#include "gazeflow/config.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace gazeflow {
namespace {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports line and column in what().
    throw ConfigError(path + ": " + e.what());
  }
}

[[noreturn]] void fail_field(const std::string& where, const std::string& why) {
  throw ConfigError(where + ": " + why);
}

double get_double(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) fail_field(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail_field(where, "must be finite");
  return v;
}

int get_int(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_integer()) fail_field(where, "expected an integer");
  return j.get<int>();
}

std::string get_string(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string()) fail_field(where, "expected a string");
  return j.get<std::string>();
}

template <typename T, typename Getter>
void maybe(const nlohmann::json& obj, const char* field,
           const std::string& prefix, T& out, Getter getter) {
  if (!obj.contains(field)) return;
  out = getter(obj.at(field), prefix + "." + field);
}

void read_doubles(const nlohmann::json& j, const std::string& where,
                  double* out, std::size_t n) {
  if (!j.is_array() || j.size() != n) {
    fail_field(where, "expected an array of " + std::to_string(n) + " numbers");
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = get_double(j[i], where + "[" + std::to_string(i) + "]");
  }
}

Vec3 get_vec3(const nlohmann::json& j, const std::string& where) {
  double v[3];
  read_doubles(j, where, v, 3);
  return {v[0], v[1], v[2]};
}

RigidPose get_pose(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) fail_field(where, "expected an object");
  Mat3 rotation;
  Vec3 translation;
  if (j.contains("rotation")) {
    read_doubles(j.at("rotation"), where + ".rotation", rotation.m.data(), 9);
  }
  if (j.contains("translation_mm")) {
    translation = get_vec3(j.at("translation_mm"), where + ".translation_mm");
  }
  try {
    return RigidPose(rotation, translation);
  } catch (const Error& e) {
    fail_field(where, e.what());
  }
}

AoiRect get_rect(const nlohmann::json& j, const std::string& where) {
  // [x_min, x_max, y_min, y_max] in screen millimetres.
  double v[4];
  read_doubles(j, where, v, 4);
  try {
    return AoiRect(v[0], v[1], v[2], v[3]);
  } catch (const Error& e) {
    fail_field(where, e.what());
  }
}

SceneCalibration parse_calibration(const nlohmann::json& j,
                                   const std::string& prefix) {
  if (!j.is_object()) fail_field(prefix, "expected an object");
  RigidPose screen;
  // Absent fields fall back to the shipped default scene.
  RigidPose camera(Mat3::rotation_y(kPi), Vec3{0.0, 0.0, 0.0});
  std::optional<Vec3> eye = Vec3{0.0, 150.0, 1000.0};
  if (j.contains("screen_pose")) {
    screen = get_pose(j.at("screen_pose"), prefix + ".screen_pose");
  }
  if (j.contains("camera_pose")) {
    camera = get_pose(j.at("camera_pose"), prefix + ".camera_pose");
  }
  if (j.contains("eye_origin_mm")) {
    // Explicit null drops the fixed-seat override and uses the camera
    // centre as the ray origin.
    if (j.at("eye_origin_mm").is_null()) {
      eye.reset();
    } else {
      eye = get_vec3(j.at("eye_origin_mm"), prefix + ".eye_origin_mm");
    }
  }
  try {
    return SceneCalibration(screen, camera, eye);
  } catch (const Error& e) {
    fail_field(prefix, e.what());
  }
}

DetectorConfig parse_detector(const nlohmann::json& j,
                              const std::string& prefix) {
  if (!j.is_object()) fail_field(prefix, "expected an object");
  DetectorConfig d;
  maybe(j, "smooth_window", prefix, d.smooth_window, get_int);
  maybe(j, "engage_window_s", prefix, d.engage_window_s, get_double);
  maybe(j, "disengage_window_s", prefix, d.disengage_window_s, get_double);
  maybe(j, "engage_threshold", prefix, d.engage_threshold, get_double);
  maybe(j, "disengage_threshold", prefix, d.disengage_threshold, get_double);
  maybe(j, "timeout_s", prefix, d.timeout_s, get_double);
  maybe(j, "min_window_samples", prefix, d.min_window_samples, get_int);
  try {
    d.validate();
  } catch (const Error& e) {
    fail_field(prefix, e.what());
  }
  return d;
}

AoiLayout parse_layout(const nlohmann::json& j, const std::string& prefix) {
  if (!j.is_object()) fail_field(prefix, "expected an object");
  AoiLayout layout = default_layout();
  AoiRect tablet = layout.tablet;
  AoiRect face = layout.face;
  if (j.contains("tablet_mm")) {
    tablet = get_rect(j.at("tablet_mm"), prefix + ".tablet_mm");
  }
  if (j.contains("face_mm")) {
    face = get_rect(j.at("face_mm"), prefix + ".face_mm");
  }
  try {
    return AoiLayout(tablet, face);
  } catch (const Error& e) {
    fail_field(prefix, e.what());
  }
}

ServiceConfig parse_service(const nlohmann::json& j,
                            const std::string& prefix) {
  if (!j.is_object()) fail_field(prefix, "expected an object");
  ServiceConfig s;
  maybe(j, "host", prefix, s.host, get_string);
  maybe(j, "port", prefix, s.port, get_int);
  maybe(j, "heartbeat_s", prefix, s.heartbeat_s, get_double);
  if (j.contains("max_line_bytes")) {
    const int v = get_int(j.at("max_line_bytes"), prefix + ".max_line_bytes");
    if (v <= 0) fail_field(prefix + ".max_line_bytes", "must be positive");
    s.max_line_bytes = static_cast<std::size_t>(v);
  }
  if (j.contains("max_buffer_bytes")) {
    const int v =
        get_int(j.at("max_buffer_bytes"), prefix + ".max_buffer_bytes");
    if (v <= 0) fail_field(prefix + ".max_buffer_bytes", "must be positive");
    s.max_buffer_bytes = static_cast<std::size_t>(v);
  }
  try {
    s.validate();
  } catch (const Error& e) {
    fail_field(prefix, e.what());
  }
  return s;
}

}  // namespace

void ServiceConfig::validate() const {
  if (host.empty()) {
    throw ConfigError("host must be non-empty");
  }
  if (port < 0 || port > 65535) {
    throw ConfigError("port must lie in [0, 65535]");
  }
  if (!std::isfinite(heartbeat_s) || heartbeat_s < 0.0) {
    throw ConfigError("heartbeat_s must be non-negative");
  }
  if (max_line_bytes < 64) {
    throw ConfigError("max_line_bytes must be at least 64");
  }
  if (max_buffer_bytes < max_line_bytes) {
    throw ConfigError("max_buffer_bytes must be at least max_line_bytes");
  }
}

SceneCalibration default_calibration() {
  // Camera at the screen origin facing the user; zero yaw/pitch then aims
  // at the display instead of away from it.
  return SceneCalibration(
      RigidPose::identity(),
      RigidPose(Mat3::rotation_y(kPi), Vec3{0.0, 0.0, 0.0}),
      Vec3{0.0, 150.0, 1000.0});
}

AoiLayout default_layout() {
  // Tablet lying below the display centre, face box around the camera.
  return AoiLayout(AoiRect(-120.0, 120.0, -450.0, -250.0),
                   AoiRect(-100.0, 100.0, -100.0, 100.0));
}

SceneCalibration load_calibration(const std::string& path) {
  return parse_calibration(load_json_file(path), "calibration");
}

AppConfig load_app_config(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  if (!j.is_object()) {
    throw ConfigError(path + ": top-level config must be a JSON object");
  }
  AppConfig config;
  if (j.contains("detector")) {
    config.detector = parse_detector(j.at("detector"), "detector");
  }
  if (j.contains("calibration") && j.contains("calibration_path")) {
    throw ConfigError(path +
                      ": give either 'calibration' or 'calibration_path'");
  }
  if (j.contains("calibration")) {
    config.calibration = parse_calibration(j.at("calibration"), "calibration");
  } else if (j.contains("calibration_path")) {
    config.calibration = load_calibration(
        get_string(j.at("calibration_path"), "calibration_path"));
  }
  if (j.contains("layout")) {
    config.layout = parse_layout(j.at("layout"), "layout");
  }
  if (j.contains("service")) {
    config.service = parse_service(j.at("service"), "service");
  }
  return config;
}

BehaviorProfile load_profile(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  if (!j.is_object()) {
    throw ConfigError(path + ": profile must be a JSON object");
  }
  BehaviorProfile p;
  const std::string prefix = "profile";
  maybe(j, "sample_rate_hz", prefix, p.sample_rate_hz, get_double);
  maybe(j, "read_time_median_s", prefix, p.read_time_median_s, get_double);
  maybe(j, "read_time_sigma", prefix, p.read_time_sigma, get_double);
  maybe(j, "face_hold_s", prefix, p.face_hold_s, get_double);
  maybe(j, "page_timeout_s", prefix, p.page_timeout_s, get_double);
  maybe(j, "shift_probability", prefix, p.shift_probability, get_double);
  maybe(j, "tablet_tpr", prefix, p.tablet_tpr, get_double);
  maybe(j, "face_tpr", prefix, p.face_tpr, get_double);
  maybe(j, "noise_deg", prefix, p.noise_deg, get_double);
  maybe(j, "glance_rate_hz", prefix, p.glance_rate_hz, get_double);
  maybe(j, "glance_hold_s", prefix, p.glance_hold_s, get_double);
  maybe(j, "return_lag_s", prefix, p.return_lag_s, get_double);
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return p;
}

}  // namespace gazeflow
