#include "gazeflow/smoothing.hpp"

#include <string>

namespace gazeflow {

SmoothingBuffer::SmoothingBuffer(int window) : window_(window) {
  if (window < 1) {
    throw ConfigError("smoothing window must be >= 1, got " +
                      std::to_string(window));
  }
  yaw_.resize(static_cast<size_t>(window), 0.0);
  pitch_.resize(static_cast<size_t>(window), 0.0);
}

GazeSample SmoothingBuffer::push_and_smooth(const GazeSample& sample) {
  if (!std::isfinite(sample.timestamp)) {
    throw OrderingError("sample timestamp is not finite");
  }
  if (last_timestamp_ && sample.timestamp <= *last_timestamp_) {
    throw OrderingError("sample timestamp " + std::to_string(sample.timestamp) +
                        " does not exceed previous " +
                        std::to_string(*last_timestamp_));
  }
  last_timestamp_ = sample.timestamp;

  yaw_[static_cast<size_t>(next_)] = sample.gaze.yaw;
  pitch_[static_cast<size_t>(next_)] = sample.gaze.pitch;
  next_ = (next_ + 1) % window_;
  if (count_ < window_) ++count_;

  // Sum oldest to newest so the result matches a naive trailing mean
  // bit for bit.
  double yaw_sum = 0.0, pitch_sum = 0.0;
  const int oldest = (next_ - count_ + window_) % window_;
  for (int i = 0; i < count_; ++i) {
    const size_t idx = static_cast<size_t>((oldest + i) % window_);
    yaw_sum += yaw_[idx];
    pitch_sum += pitch_[idx];
  }

  GazeSample out = sample;
  out.gaze = EulerGaze(yaw_sum / count_, pitch_sum / count_);
  return out;
}

void SmoothingBuffer::reset() {
  count_ = 0;
  next_ = 0;
  last_timestamp_.reset();
}

}  // namespace gazeflow
