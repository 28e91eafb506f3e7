#include "gazeflow/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gazeflow {
namespace {

// Window and page-clock comparisons resolve as if computed exactly: a
// sample dated precisely one window before t stays excluded even when
// t - W rounds below the sample's timestamp.
constexpr double kBoundaryTolS = 1e-9;

}  // namespace

std::string_view to_string(EngagementState state) {
  switch (state) {
    case EngagementState::idle:
      return "Idle";
    case EngagementState::engaged:
      return "Engaged";
    case EngagementState::disengaged:
      return "Disengaged";
  }
  return "Idle";
}

EngagementState engagement_state_from_string(std::string_view s) {
  if (s == "Idle") return EngagementState::idle;
  if (s == "Engaged") return EngagementState::engaged;
  if (s == "Disengaged") return EngagementState::disengaged;
  throw ParseError("unknown engagement state '" + std::string(s) + "'", "", 0);
}

std::string_view to_string(TransitionCause cause) {
  switch (cause) {
    case TransitionCause::gaze:
      return "gaze";
    case TransitionCause::timeout:
      return "timeout";
    case TransitionCause::reset:
      return "reset";
  }
  return "gaze";
}

TransitionCause transition_cause_from_string(std::string_view s) {
  if (s == "gaze") return TransitionCause::gaze;
  if (s == "timeout") return TransitionCause::timeout;
  if (s == "reset") return TransitionCause::reset;
  throw ParseError("unknown transition cause '" + std::string(s) + "'", "", 0);
}

void DetectorConfig::validate() const {
  if (smooth_window < 1) {
    throw ConfigError("smooth_window must be at least 1");
  }
  if (!std::isfinite(engage_window_s) || engage_window_s <= 0.0) {
    throw ConfigError("engage_window_s must be positive");
  }
  if (!std::isfinite(disengage_window_s) || disengage_window_s <= 0.0) {
    throw ConfigError("disengage_window_s must be positive");
  }
  if (!std::isfinite(engage_threshold) || engage_threshold <= 0.0 ||
      engage_threshold > 1.0) {
    throw ConfigError("engage_threshold must lie in (0, 1]");
  }
  if (!std::isfinite(disengage_threshold) || disengage_threshold <= 0.0 ||
      disengage_threshold > 1.0) {
    throw ConfigError("disengage_threshold must lie in (0, 1]");
  }
  if (!std::isfinite(timeout_s) ||
      timeout_s <= std::max(engage_window_s, disengage_window_s)) {
    throw ConfigError("timeout_s must exceed both decision windows");
  }
  if (min_window_samples < 1) {
    throw ConfigError("min_window_samples must be at least 1");
  }
}

Detector::Detector(const DetectorConfig& config, double start_time)
    : config_(config), page_start_(start_time) {
  config_.validate();
  if (!std::isfinite(start_time)) {
    throw ConfigError("detector start time must be finite");
  }
}

Detector::WindowCount Detector::count_window(double now, double width,
                                             AoiLabel target) const {
  WindowCount out;
  for (auto it = window_.rbegin(); it != window_.rend(); ++it) {
    if (it->timestamp <= now - width + kBoundaryTolS) break;
    ++out.total;
    if (it->label == target) ++out.hits;
  }
  return out;
}

std::optional<TransitionEvent> Detector::feed(const TimedGazePoint& point) {
  const double t = point.timestamp;
  if (!std::isfinite(t)) {
    throw OrderingError("sample timestamp must be finite");
  }
  if (last_timestamp_ && t <= *last_timestamp_) {
    throw OrderingError("sample timestamps must be strictly increasing");
  }
  last_timestamp_ = t;

  window_.push_back({t, point.label});
  const double max_w =
      std::max(config_.engage_window_s, config_.disengage_window_s);
  while (!window_.empty() &&
         window_.front().timestamp <= t - max_w + kBoundaryTolS) {
    window_.pop_front();
  }

  switch (state_) {
    case EngagementState::idle: {
      if (t - page_start_ < config_.engage_window_s - kBoundaryTolS) {
        return std::nullopt;
      }
      const WindowCount c =
          count_window(t, config_.engage_window_s, AoiLabel::tablet);
      if (c.total < config_.min_window_samples) return std::nullopt;
      const double fraction = static_cast<double>(c.hits) / c.total;
      if (fraction > config_.engage_threshold) {
        state_ = EngagementState::engaged;
        return TransitionEvent{t, EngagementState::idle,
                               EngagementState::engaged, TransitionCause::gaze,
                               fraction, c.total};
      }
      return std::nullopt;
    }
    case EngagementState::engaged: {
      // A real gaze shift beats the failsafe when both trip on one sample.
      if (t - page_start_ >= config_.disengage_window_s - kBoundaryTolS) {
        const WindowCount c =
            count_window(t, config_.disengage_window_s, AoiLabel::face);
        if (c.total >= config_.min_window_samples) {
          const double fraction = static_cast<double>(c.hits) / c.total;
          if (fraction > config_.disengage_threshold) {
            state_ = EngagementState::disengaged;
            return TransitionEvent{t, EngagementState::engaged,
                                   EngagementState::disengaged,
                                   TransitionCause::gaze, fraction, c.total};
          }
        }
      }
      if (t - page_start_ >= config_.timeout_s - kBoundaryTolS) {
        const WindowCount c =
            count_window(t, config_.disengage_window_s, AoiLabel::face);
        state_ = EngagementState::disengaged;
        return TransitionEvent{t, EngagementState::engaged,
                               EngagementState::disengaged,
                               TransitionCause::timeout, std::nullopt, c.total};
      }
      return std::nullopt;
    }
    case EngagementState::disengaged:
      return std::nullopt;
  }
  return std::nullopt;
}

TransitionEvent Detector::advance_page(double timestamp) {
  if (state_ != EngagementState::disengaged) {
    throw StateError("advance_page requires the Disengaged state");
  }
  if (!std::isfinite(timestamp) || timestamp < page_start_) {
    throw OrderingError("page start times must not decrease");
  }
  state_ = EngagementState::idle;
  page_start_ = timestamp;
  window_.clear();
  return TransitionEvent{timestamp, EngagementState::disengaged,
                         EngagementState::idle, TransitionCause::reset,
                         std::nullopt, 0};
}

}  // namespace gazeflow
