#include "gazeflow/geometry.hpp"

#include <algorithm>
#include <string>

namespace gazeflow {

namespace {

constexpr double kOrthonormalTol = 1e-6;
constexpr double kUnitTol = 1e-6;
constexpr double kParallelTol = 1e-9;
constexpr double kMinPlaneClearanceMm = 1.0;
constexpr double kResidualTolMm = 1e-6;

}  // namespace

EulerGaze::EulerGaze(double yaw_rad, double pitch_rad)
    : yaw(yaw_rad), pitch(pitch_rad) {
  if (!std::isfinite(yaw_rad) || !std::isfinite(pitch_rad)) {
    throw InvalidAngleError("gaze angle is not finite");
  }
  if (yaw_rad < -kPi || yaw_rad > kPi) {
    throw InvalidAngleError("yaw " + std::to_string(yaw_rad) +
                            " outside [-pi, pi]");
  }
  if (pitch_rad < -kPi / 2 || pitch_rad > kPi / 2) {
    throw InvalidAngleError("pitch " + std::to_string(pitch_rad) +
                            " outside [-pi/2, pi/2]");
  }
}

RigidPose::RigidPose(const Mat3& rotation_in, const Vec3& translation_mm)
    : rotation(rotation_in), translation(translation_mm) {
  for (double v : rotation.m) {
    if (!std::isfinite(v)) throw ConfigError("rotation has non-finite entry");
  }
  if (!translation.finite()) {
    throw ConfigError("translation has non-finite entry");
  }
  const Mat3 gram = rotation.transposed() * rotation;
  const Mat3 id = Mat3::identity();
  for (size_t i = 0; i < 9; ++i) {
    if (std::abs(gram.m[i] - id.m[i]) > kOrthonormalTol) {
      throw ConfigError("rotation is not orthonormal (R^T R != I)");
    }
  }
  if (std::abs(rotation.determinant() - 1.0) > kOrthonormalTol) {
    throw ConfigError("rotation determinant is not +1");
  }
}

SceneCalibration::SceneCalibration(RigidPose screen, RigidPose camera,
                                   std::optional<Vec3> eye_origin)
    : screen_pose(screen), camera_pose(camera), eye_origin_override(eye_origin) {
  if (eye_origin_override && !eye_origin_override->finite()) {
    throw ConfigError("eye origin has non-finite entry");
  }
  const ScreenPlane plane = screen_plane(*this);
  const Vec3 origin = eye_origin_world(*this);
  const double clearance = std::abs(plane.normal.dot(origin) - plane.offset);
  if (clearance <= kMinPlaneClearanceMm) {
    throw ConfigError("gaze origin lies in the screen plane (clearance " +
                      std::to_string(clearance) + " mm)");
  }
}

Vec3 gaze_vector(const EulerGaze& gaze) {
  // Reconstruct through the validating constructor so raw structs are
  // checked too.
  const EulerGaze g(gaze.yaw, gaze.pitch);
  const double cp = std::cos(g.pitch);
  return {cp * std::sin(g.yaw), -std::sin(g.pitch), cp * std::cos(g.yaw)};
}

EulerGaze euler_from_vector(const Vec3& v) {
  if (!v.finite() || std::abs(v.norm() - 1.0) > kUnitTol) {
    throw InvalidAngleError("gaze vector is not unit length");
  }
  const double pitch = -std::asin(std::clamp(v.y, -1.0, 1.0));
  const double yaw = std::atan2(v.x, v.z);
  return EulerGaze(yaw, pitch);
}

ScreenPlane screen_plane(const SceneCalibration& calib) {
  const Vec3 n = calib.screen_pose.rotation.col(2);
  return {n, n.dot(calib.screen_pose.translation)};
}

Vec3 eye_origin_world(const SceneCalibration& calib) {
  if (calib.eye_origin_override) {
    // Override is given in screen coordinates; map into the world frame.
    return calib.screen_pose.rotation * (*calib.eye_origin_override) +
           calib.screen_pose.translation;
  }
  return -(calib.camera_pose.rotation.transposed() *
           calib.camera_pose.translation);
}

GazeRay gaze_ray(const SceneCalibration& calib, const Vec3& v_eye) {
  return {eye_origin_world(calib),
          calib.camera_pose.rotation.transposed() * v_eye};
}

ProjectionResult project_to_screen(const SceneCalibration& calib,
                                   const EulerGaze& gaze) {
  const GazeRay ray = gaze_ray(calib, gaze_vector(gaze));
  const ScreenPlane plane = screen_plane(calib);

  const double denom = plane.normal.dot(ray.direction);
  if (std::abs(denom) < kParallelTol) {
    return {std::nullopt, ProjectionError::parallel_ray};
  }
  const double t = (plane.offset - plane.normal.dot(ray.origin)) / denom;
  if (t <= 0.0) {
    return {std::nullopt, ProjectionError::behind_screen};
  }

  const Vec3 hit = ray.origin + ray.direction * t;
  const Vec3 local = calib.screen_pose.rotation.transposed() *
                     (hit - calib.screen_pose.translation);
  if (std::abs(local.z) > kResidualTolMm) {
    throw Error("screen intersection residual " + std::to_string(local.z) +
                " mm exceeds tolerance");
  }
  return {Point2D{local.x, local.y}, ProjectionError::none};
}

EulerGaze aim_at(const SceneCalibration& calib, const Point2D& target) {
  const Vec3 target_world =
      calib.screen_pose.rotation * Vec3{target.x, target.y, 0.0} +
      calib.screen_pose.translation;
  const Vec3 origin = eye_origin_world(calib);
  const Vec3 dir = (target_world - origin).normalized();
  // gaze_ray applies R_c^T, so express the direction in camera coordinates.
  const Vec3 v_eye = calib.camera_pose.rotation * dir;
  return euler_from_vector(v_eye);
}

}  // namespace gazeflow
