#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "gazeflow/geometry.hpp"
#include "gazeflow/smoothing.hpp"

namespace gazeflow {

// The three regions gaze points are discretized into.
enum class AoiLabel { tablet, face, elsewhere };

std::string_view to_string(AoiLabel label);
AoiLabel aoi_label_from_string(std::string_view s);

// Axis-aligned rectangle in screen-plane coordinates, millimetres.
// Membership is half-open: [x_min, x_max) x [y_min, y_max).
struct AoiRect {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;

  AoiRect() = default;
  AoiRect(double x_min_mm, double x_max_mm, double y_min_mm, double y_max_mm);

  bool contains(const Point2D& p) const {
    return p.x >= x_min && p.x < x_max && p.y >= y_min && p.y < y_max;
  }
  bool overlaps(const AoiRect& o) const {
    return x_min < o.x_max && o.x_min < x_max && y_min < o.y_max &&
           o.y_min < y_max;
  }
  Point2D center() const {
    return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0};
  }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

// Task region and face region on the interaction plane. The two rectangles
// must be disjoint; everything outside both is Elsewhere.
struct AoiLayout {
  AoiRect tablet;
  AoiRect face;

  AoiLayout() = default;
  AoiLayout(const AoiRect& tablet_rect, const AoiRect& face_rect);
};

// Tablet if inside the tablet rect, else Face if inside the face rect, else
// Elsewhere. Total and deterministic.
AoiLabel classify(const AoiLayout& layout, const Point2D& point);

// One pipeline output sample: where the (smoothed, projected) gaze landed.
// `point` is absent when the projection failed, and the label is then
// Elsewhere by construction.
struct TimedGazePoint {
  double timestamp = 0.0;
  std::optional<Point2D> point;
  AoiLabel label = AoiLabel::elsewhere;
};

// Smoothing -> projection -> AOI classification for one session stream.
// Single writer; reset() clears the smoothing state at page boundaries.
class GazeLabeler {
 public:
  GazeLabeler(const SceneCalibration& calib, const AoiLayout& layout,
              int smooth_window);

  TimedGazePoint label(const GazeSample& sample);
  void reset();

 private:
  SceneCalibration calib_;
  AoiLayout layout_;
  SmoothingBuffer smoother_;
};

// Applies the full labelling chain to a time-ordered stream. Output length
// equals input length; timestamps are preserved exactly.
std::vector<TimedGazePoint> label_stream(const AoiLayout& layout,
                                         const SceneCalibration& calib,
                                         int smooth_window,
                                         std::span<const GazeSample> samples);

}  // namespace gazeflow
