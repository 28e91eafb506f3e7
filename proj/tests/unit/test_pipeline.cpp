#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"

#include "gazeflow/config.hpp"
#include "gazeflow/pipeline.hpp"
#include "gazeflow/simulator.hpp"
#include "support/oracles.hpp"

using namespace gazeflow;

namespace {

// 5 Hz aims: tablet centre through shift_s, face centre afterwards, back to
// the tablet after back_s when given.
std::vector<GazeSample> aimed_samples(const SceneCalibration& calib,
                                      const AoiLayout& layout, double end_s,
                                      double shift_s,
                                      std::optional<double> back_s = {}) {
  std::vector<GazeSample> out;
  for (int k = 1;; ++k) {
    const double t = k / 5.0;
    if (t > end_s + 1e-9) break;
    const bool on_face =
        t > shift_s + 1e-9 && (!back_s || t <= *back_s + 1e-9);
    GazeSample s;
    s.timestamp = t;
    s.gaze = aim_at(calib,
                    on_face ? layout.face.center() : layout.tablet.center());
    out.push_back(s);
  }
  return out;
}

void check_event_equal(const TransitionEvent& a, const TransitionEvent& b) {
  CHECK(a.timestamp == b.timestamp);
  CHECK(a.from == b.from);
  CHECK(a.to == b.to);
  CHECK(a.cause == b.cause);
  CHECK(a.window_samples == b.window_samples);
  REQUIRE(a.window_fraction.has_value() == b.window_fraction.has_value());
  if (a.window_fraction) {
    CHECK(*a.window_fraction == doctest::Approx(*b.window_fraction));
  }
}

}  // namespace

TEST_CASE("smoothed stream disengages two samples after the raw one") {
  const SceneCalibration calib = default_calibration();
  const AoiLayout layout = default_layout();
  const std::vector<GazeSample> samples =
      aimed_samples(calib, layout, 6.0, 4.0);

  DetectorConfig cfg;  // smooth_window = 3
  const std::vector<TransitionEvent> events =
      run_session(cfg, layout, calib, samples);
  REQUIRE(events.size() == 3);
  CHECK(events[0].timestamp == 1.0);
  CHECK(events[0].to == EngagementState::engaged);
  CHECK(*events[0].window_fraction == doctest::Approx(1.0));
  // The two blended samples after the shift land between the regions, so
  // the face fraction first clears 0.5 at 5.0 rather than 4.6.
  CHECK(events[1].timestamp == doctest::Approx(5.0));
  CHECK(events[1].to == EngagementState::disengaged);
  CHECK(events[1].cause == TransitionCause::gaze);
  CHECK(*events[1].window_fraction == doctest::Approx(0.6));
  CHECK(events[2].timestamp == events[1].timestamp);
  CHECK(events[2].cause == TransitionCause::reset);

  DetectorConfig raw = cfg;
  raw.smooth_window = 1;
  const std::vector<TransitionEvent> raw_events =
      run_session(raw, layout, calib, samples);
  REQUIRE(raw_events.size() == 3);
  CHECK(raw_events[1].timestamp == doctest::Approx(4.6));
  CHECK(raw_events[1].cause == TransitionCause::gaze);
}

TEST_CASE("page turn clears the smoothing buffer") {
  const SceneCalibration calib = default_calibration();
  const AoiLayout layout = default_layout();
  // Face dwell ends at 5.0 and the gaze returns to the tablet.
  const std::vector<GazeSample> samples =
      aimed_samples(calib, layout, 7.0, 4.0, 5.0);

  const std::vector<TransitionEvent> events =
      run_session(DetectorConfig{}, layout, calib, samples);
  REQUIRE(events.size() == 4);
  CHECK(events[1].timestamp == doctest::Approx(5.0));  // disengage
  CHECK(events[2].cause == TransitionCause::reset);

  // With stale face samples in the buffer the first two page-two labels
  // would blend off the tablet and the engage fraction would read 0.6.
  CHECK(events[3].to == EngagementState::engaged);
  CHECK(events[3].timestamp == doctest::Approx(6.0));
  CHECK(*events[3].window_fraction == doctest::Approx(1.0));
  CHECK(events[3].window_samples == 5);
}

TEST_CASE("feed exposes the labeled point and paired transitions") {
  const SceneCalibration calib = default_calibration();
  const AoiLayout layout = default_layout();
  DetectorConfig cfg;
  cfg.smooth_window = 1;
  SessionPipeline pipe(cfg, layout, calib);

  const std::vector<GazeSample> samples =
      aimed_samples(calib, layout, 4.6, 4.0);
  std::vector<PipelineStep> steps;
  for (const GazeSample& s : samples) steps.push_back(pipe.feed(s));

  REQUIRE(steps.size() == 23);
  CHECK(steps[0].event_count == 0);
  CHECK(steps[0].point.label == AoiLabel::tablet);
  REQUIRE(steps[0].point.point.has_value());
  CHECK(steps[0].point.point->y == doctest::Approx(-350.0));

  // Sample 5 (t = 1.0) engages; the last sample (t = 4.6) disengages and
  // turns the page in the same step.
  CHECK(steps[4].event_count == 1);
  CHECK(steps[4].events[0].to == EngagementState::engaged);
  const PipelineStep& last = steps.back();
  CHECK(last.point.label == AoiLabel::face);
  REQUIRE(last.event_count == 2);
  CHECK(last.events[0].to == EngagementState::disengaged);
  CHECK(last.events[1].cause == TransitionCause::reset);
  CHECK(last.events[1].timestamp == last.events[0].timestamp);
  CHECK(pipe.state() == EngagementState::idle);
}

TEST_CASE("run_session equals a manual feed loop") {
  const SceneCalibration calib = default_calibration();
  const AoiLayout layout = default_layout();
  BehaviorProfile profile;
  const GeneratedSession session =
      generate_session(profile, calib, layout, 4, 321);

  const DetectorConfig cfg;
  const std::vector<TransitionEvent> batch =
      run_session(cfg, layout, calib, session.samples);

  SessionPipeline pipe(cfg, layout, calib);
  std::vector<TransitionEvent> manual;
  for (const GazeSample& s : session.samples) {
    const PipelineStep step = pipe.feed(s);
    for (int i = 0; i < step.event_count; ++i) manual.push_back(step.events[i]);
  }

  REQUIRE(batch.size() == manual.size());
  CHECK(batch.size() > 0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    check_event_equal(batch[i], manual[i]);
  }
}

TEST_CASE("unsmoothed sessions match the rescan oracle end to end") {
  const SceneCalibration calib = default_calibration();
  const AoiLayout layout = default_layout();
  BehaviorProfile profile;

  DetectorConfig cfg;
  cfg.smooth_window = 1;  // continuous labeling only matches sans memory
  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const GeneratedSession session =
        generate_session(profile, calib, layout, 5, seed);
    const std::vector<TimedGazePoint> labels =
        label_stream(layout, calib, 1, session.samples);
    const std::vector<TransitionEvent> expected =
        gazeflow::testing::naive_session_events(cfg, labels);
    const std::vector<TransitionEvent> actual =
        run_session(cfg, layout, calib, session.samples);
    REQUIRE(actual.size() == expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      check_event_equal(actual[i], expected[i]);
    }
  }
}
