#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "gazeflow/errors.hpp"

// Gaze ray geometry: yaw/pitch angles to 3D rays, and ray/screen-plane
// intersection to 2D points on the display.
//
// Frame conventions (all positions in millimetres):
//   - A fixed world frame ties everything together.
//   - The screen pose {R_s, T_s} maps screen coordinates to world:
//     x_world = R_s * x_screen + T_s. The display surface is the plane
//     z_screen = 0; the user sits at positive z.
//   - The camera pose {R_c, T_c} maps world coordinates to camera:
//     x_cam = R_c * x_world + T_c, so the camera centre sits at
//     -R_c^T * T_c in world coordinates.
//   - The shipped default keeps the screen pose identity and turns the
//     camera half a turn about y so it faces the user: a gaze reported at
//     yaw = pitch = 0 then points at the screen, not away from it.

namespace gazeflow {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }

  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

// 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double at(int r, int c) const { return m[static_cast<size_t>(r * 3 + c)]; }
  double& at(int r, int c) { return m[static_cast<size_t>(r * 3 + c)]; }

  Vec3 col(int c) const { return {at(0, c), at(1, c), at(2, c)}; }

  Vec3 operator*(const Vec3& v) const {
    return {at(0, 0) * v.x + at(0, 1) * v.y + at(0, 2) * v.z,
            at(1, 0) * v.x + at(1, 1) * v.y + at(1, 2) * v.z,
            at(2, 0) * v.x + at(2, 1) * v.y + at(2, 2) * v.z};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += at(i, k) * o.at(k, j);
        r.at(i, j) = s;
      }
    }
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.at(i, j) = at(j, i);
    return r;
  }

  double determinant() const {
    return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
           at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
           at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  }

  static Mat3 identity() { return Mat3{}; }

  static Mat3 rotation_x(double angle_rad) {
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    return Mat3{{1, 0, 0, 0, c, -s, 0, s, c}};
  }
  static Mat3 rotation_y(double angle_rad) {
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    return Mat3{{c, 0, s, 0, 1, 0, -s, 0, c}};
  }
  static Mat3 rotation_z(double angle_rad) {
    const double c = std::cos(angle_rad), s = std::sin(angle_rad);
    return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
  }
};

// Yaw/pitch estimate in radians, as produced by an appearance-based gaze
// model. Positive yaw turns the gaze toward the user's left in the camera
// view; positive pitch points it downward (the y component of the gaze
// vector is -sin(pitch)).
struct EulerGaze {
  double yaw = 0.0;
  double pitch = 0.0;

  EulerGaze() = default;
  // Validates: both finite, yaw in [-pi, pi], pitch in [-pi/2, pi/2].
  EulerGaze(double yaw_rad, double pitch_rad);
};

// Rigid transform. The rotation must be orthonormal with determinant +1,
// checked to 1e-6 at construction.
struct RigidPose {
  Mat3 rotation;
  Vec3 translation;

  RigidPose() = default;
  RigidPose(const Mat3& rotation_in, const Vec3& translation_mm);

  static RigidPose identity() { return RigidPose{}; }
};

// Screen and camera poses plus an optional fixed eye position.
//
// When eye_origin_override is set (screen coordinates, millimetres) the gaze
// ray starts there, modelling a fixed seat; otherwise the origin is the
// camera centre -R_c^T * T_c. Either way the origin must sit more than 1 mm
// off the screen plane.
struct SceneCalibration {
  RigidPose screen_pose;
  RigidPose camera_pose;
  std::optional<Vec3> eye_origin_override;

  SceneCalibration() = default;
  SceneCalibration(RigidPose screen, RigidPose camera,
                   std::optional<Vec3> eye_origin = std::nullopt);
};

// Screen plane in world coordinates: points p with normal . p = offset.
struct ScreenPlane {
  Vec3 normal;     // unit
  double offset = 0.0;  // normal . T_s, millimetres
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

struct GazeRay {
  Vec3 origin;     // world, millimetres
  Vec3 direction;  // world, unit
};

enum class ProjectionError {
  none,
  parallel_ray,   // gaze direction lies in the screen plane
  behind_screen,  // intersection is behind the eye (gaze points away)
};

struct ProjectionResult {
  std::optional<Point2D> point;
  ProjectionError error = ProjectionError::none;

  bool ok() const { return point.has_value(); }
};

// Unit gaze direction in camera coordinates:
// [cos(pitch)sin(yaw), -sin(pitch), cos(pitch)cos(yaw)].
Vec3 gaze_vector(const EulerGaze& gaze);

// Inverse of gaze_vector. `v` must be unit length (1e-6).
EulerGaze euler_from_vector(const Vec3& v);

// Plane of the display: normal is the third column of R_s, offset normal.T_s.
ScreenPlane screen_plane(const SceneCalibration& calib);

// World-coordinate position the gaze ray starts from: the configured eye
// override mapped through the screen pose, or the camera centre.
Vec3 eye_origin_world(const SceneCalibration& calib);

// Line of sight in world coordinates: direction R_c^T * v_eye from the eye
// origin. Rotation inverses are transposes; orthonormality is enforced at
// pose construction.
GazeRay gaze_ray(const SceneCalibration& calib, const Vec3& v_eye);

// Full chain: angles -> camera-frame vector -> world ray -> intersection with
// the screen plane -> 2D screen-plane point. The reconstructed screen-local
// z must vanish to 1e-6 mm.
ProjectionResult project_to_screen(const SceneCalibration& calib,
                                   const EulerGaze& gaze);

// Exact yaw/pitch whose ray passes through `target` on the screen plane.
// Inverse of project_to_screen for on-screen targets; used by the simulator
// and round-trip tests.
EulerGaze aim_at(const SceneCalibration& calib, const Point2D& target);

}  // namespace gazeflow
