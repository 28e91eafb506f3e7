#pragma once

#include <cstddef>
#include <string>

#include "gazeflow/aoi.hpp"
#include "gazeflow/detector.hpp"
#include "gazeflow/geometry.hpp"
#include "gazeflow/simulator.hpp"

namespace gazeflow {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 7643;
  // Seconds between heartbeat records on an otherwise quiet connection;
  // 0 disables them.
  double heartbeat_s = 0.0;
  std::size_t max_line_bytes = std::size_t{1} << 16;
  std::size_t max_buffer_bytes = std::size_t{1} << 20;

  void validate() const;
};

// Shipped defaults: poses identity (screen, camera, and world coincide), eye
// fixed 1 m in front of the screen origin and 150 mm above it, tablet AOI
// below the camera, face AOI centred on it.
SceneCalibration default_calibration();
AoiLayout default_layout();

struct AppConfig {
  DetectorConfig detector;
  SceneCalibration calibration = default_calibration();
  AoiLayout layout = default_layout();
  ServiceConfig service;
};

// Loads a JSON config. Every section and field is optional and falls back
// to the defaults above; errors name the offending field path (and the line
// for syntax errors). The calibration may be given inline under
// "calibration" or in a separate file via "calibration_path", not both.
AppConfig load_app_config(const std::string& path);

// Calibration loader shared by "calibration_path" and the tests.
SceneCalibration load_calibration(const std::string& path);

BehaviorProfile load_profile(const std::string& path);

}  // namespace gazeflow
