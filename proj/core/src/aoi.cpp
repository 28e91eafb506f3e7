#include "gazeflow/aoi.hpp"

#include <string>

namespace gazeflow {

std::string_view to_string(AoiLabel label) {
  switch (label) {
    case AoiLabel::tablet:
      return "Tablet";
    case AoiLabel::face:
      return "Face";
    case AoiLabel::elsewhere:
      return "Elsewhere";
  }
  return "Elsewhere";
}

AoiLabel aoi_label_from_string(std::string_view s) {
  if (s == "Tablet") return AoiLabel::tablet;
  if (s == "Face") return AoiLabel::face;
  if (s == "Elsewhere") return AoiLabel::elsewhere;
  throw ParseError("unknown AOI label '" + std::string(s) + "'", "", 0);
}

AoiRect::AoiRect(double x_min_mm, double x_max_mm, double y_min_mm,
                 double y_max_mm)
    : x_min(x_min_mm), x_max(x_max_mm), y_min(y_min_mm), y_max(y_max_mm) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
      !std::isfinite(y_max)) {
    throw ConfigError("AOI rectangle has non-finite bound");
  }
  if (x_min >= x_max || y_min >= y_max) {
    throw ConfigError("AOI rectangle bounds must satisfy min < max");
  }
}

AoiLayout::AoiLayout(const AoiRect& tablet_rect, const AoiRect& face_rect)
    : tablet(tablet_rect), face(face_rect) {
  if (tablet.overlaps(face)) {
    throw ConfigError("tablet and face AOIs overlap");
  }
}

AoiLabel classify(const AoiLayout& layout, const Point2D& point) {
  if (layout.tablet.contains(point)) return AoiLabel::tablet;
  if (layout.face.contains(point)) return AoiLabel::face;
  return AoiLabel::elsewhere;
}

GazeLabeler::GazeLabeler(const SceneCalibration& calib, const AoiLayout& layout,
                         int smooth_window)
    : calib_(calib), layout_(layout), smoother_(smooth_window) {}

TimedGazePoint GazeLabeler::label(const GazeSample& sample) {
  const GazeSample smoothed = smoother_.push_and_smooth(sample);
  const ProjectionResult proj = project_to_screen(calib_, smoothed.gaze);
  if (!proj.ok()) {
    // Off-plane gaze is by definition not on any screen AOI.
    return {sample.timestamp, std::nullopt, AoiLabel::elsewhere};
  }
  return {sample.timestamp, proj.point, classify(layout_, *proj.point)};
}

void GazeLabeler::reset() { smoother_.reset(); }

std::vector<TimedGazePoint> label_stream(const AoiLayout& layout,
                                         const SceneCalibration& calib,
                                         int smooth_window,
                                         std::span<const GazeSample> samples) {
  GazeLabeler labeler(calib, layout, smooth_window);
  std::vector<TimedGazePoint> out;
  out.reserve(samples.size());
  for (const GazeSample& s : samples) {
    out.push_back(labeler.label(s));
  }
  return out;
}

}  // namespace gazeflow
