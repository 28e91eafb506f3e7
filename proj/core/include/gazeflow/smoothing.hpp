#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gazeflow/geometry.hpp"

namespace gazeflow {

// One timestamped gaze estimate, the pipeline's input unit. Timestamps are
// seconds since session start and must strictly increase within a stream.
struct GazeSample {
  double timestamp = 0.0;
  EulerGaze gaze;
  std::optional<std::int64_t> frame_id;
};

// Moving-average filter over the last `window` yaw/pitch estimates.
//
// Before `window` samples have arrived the mean is taken over whatever is
// available, so the detector sees output from the first frame. Averaging
// happens on raw angles, which is inaccurate near +-pi yaw; that region is
// far outside the interaction envelope in front of a display.
class SmoothingBuffer {
 public:
  // window >= 1. A window of 1 is the identity filter.
  explicit SmoothingBuffer(int window);

  // Returns the sample with yaw/pitch replaced by the mean of the most
  // recent min(count, window) values. Throws OrderingError if the timestamp
  // does not exceed the previous one.
  GazeSample push_and_smooth(const GazeSample& sample);

  // Drops all buffered samples.
  void reset();

  int window() const { return window_; }
  int count() const { return count_; }

 private:
  int window_;
  int count_ = 0;
  int next_ = 0;  // ring write position
  std::vector<double> yaw_;
  std::vector<double> pitch_;
  std::optional<double> last_timestamp_;
};

}  // namespace gazeflow
