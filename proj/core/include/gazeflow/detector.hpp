#pragma once

#include <deque>
#include <optional>
#include <string_view>

#include "gazeflow/aoi.hpp"
#include "gazeflow/errors.hpp"

namespace gazeflow {

// Engagement progresses strictly Idle -> Engaged -> Disengaged within one
// page; advance_page() is the only way back to Idle.
enum class EngagementState { idle, engaged, disengaged };

std::string_view to_string(EngagementState state);
EngagementState engagement_state_from_string(std::string_view s);

enum class TransitionCause { gaze, timeout, reset };

std::string_view to_string(TransitionCause cause);
TransitionCause transition_cause_from_string(std::string_view s);

struct DetectorConfig {
  int smooth_window = 3;
  double engage_window_s = 1.0;
  double disengage_window_s = 1.0;
  double engage_threshold = 0.4;
  double disengage_threshold = 0.5;
  double timeout_s = 10.0;
  // Windowed fractions over fewer samples than this are ignored.
  int min_window_samples = 2;

  // Throws ConfigError on the first violated constraint.
  void validate() const;
};

struct TransitionEvent {
  double timestamp = 0.0;
  EngagementState from = EngagementState::idle;
  EngagementState to = EngagementState::idle;
  TransitionCause cause = TransitionCause::gaze;
  // Present iff cause == gaze: the windowed AOI fraction that crossed the
  // threshold.
  std::optional<double> window_fraction;
  // Samples inside the decision window (0 for reset events).
  int window_samples = 0;
};

// Windowed-threshold engagement detector for one session.
//
// feed() consumes labeled gaze points with strictly increasing timestamps
// and reports at most one transition per point:
//   Idle -> Engaged      when the tablet fraction over the trailing engage
//                        window exceeds engage_threshold,
//   Engaged -> Disengaged when the face fraction over the trailing
//                        disengage window exceeds disengage_threshold, or
//                        when timeout_s elapses since the page started.
// A window only votes once it is mature (the page has been running for at
// least the window length) and holds at least min_window_samples points.
// Window membership is the half-open interval (t - W, t].
class Detector {
 public:
  explicit Detector(const DetectorConfig& config, double start_time = 0.0);

  std::optional<TransitionEvent> feed(const TimedGazePoint& point);

  // Marks a page turn: Disengaged -> Idle, clears the sample window, and
  // restarts the page clock at `timestamp`. Throws StateError outside
  // Disengaged.
  TransitionEvent advance_page(double timestamp);

  EngagementState state() const { return state_; }
  double page_start() const { return page_start_; }
  const DetectorConfig& config() const { return config_; }

 private:
  struct WindowEntry {
    double timestamp;
    AoiLabel label;
  };

  struct WindowCount {
    int total = 0;
    int hits = 0;
  };

  WindowCount count_window(double now, double width, AoiLabel target) const;

  DetectorConfig config_;
  EngagementState state_ = EngagementState::idle;
  double page_start_ = 0.0;
  std::optional<double> last_timestamp_;
  std::deque<WindowEntry> window_;
};

}  // namespace gazeflow
