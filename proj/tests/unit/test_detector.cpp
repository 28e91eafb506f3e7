#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"

#include "gazeflow/detector.hpp"
#include "gazeflow/simulator.hpp"
#include "support/oracles.hpp"

using namespace gazeflow;

namespace {

TimedGazePoint at(double t, AoiLabel label) {
  TimedGazePoint p;
  p.timestamp = t;
  p.label = label;
  return p;
}

// Labels at 5 Hz: tablet through `shift_s`, face afterwards.
std::vector<TimedGazePoint> scripted_labels(double end_s, double shift_s) {
  std::vector<TimedGazePoint> out;
  for (int k = 1;; ++k) {
    const double t = k / 5.0;
    if (t > end_s + 1e-9) break;
    out.push_back(at(t, t <= shift_s + 1e-9 ? AoiLabel::tablet
                                            : AoiLabel::face));
  }
  return out;
}

// Feeds points until the detector reports something.
std::optional<TransitionEvent> feed_until_event(
    Detector& det, std::span<const TimedGazePoint> points) {
  for (const TimedGazePoint& p : points) {
    if (auto ev = det.feed(p)) return ev;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("config validation rejects each bad field") {
  DetectorConfig good;
  CHECK_NOTHROW(good.validate());

  DetectorConfig c = good;
  c.smooth_window = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = good;
  c.engage_window_s = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = good;
  c.disengage_window_s = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = good;
  c.engage_threshold = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = good;
  c.engage_threshold = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = good;
  c.disengage_threshold = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = good;
  c.timeout_s = 1.0;  // equal to the decision windows, must exceed them
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = good;
  c.min_window_samples = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = good;
  c.engage_threshold = 1.0;  // inclusive upper bound
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("engagement fires exactly one window into the page") {
  Detector det{DetectorConfig{}};
  CHECK(det.state() == EngagementState::idle);
  for (int k = 1; k <= 4; ++k) {
    CHECK_FALSE(det.feed(at(k / 5.0, AoiLabel::tablet)).has_value());
  }
  const auto ev = det.feed(at(1.0, AoiLabel::tablet));
  REQUIRE(ev.has_value());
  CHECK(ev->timestamp == 1.0);
  CHECK(ev->from == EngagementState::idle);
  CHECK(ev->to == EngagementState::engaged);
  CHECK(ev->cause == TransitionCause::gaze);
  REQUIRE(ev->window_fraction.has_value());
  CHECK(*ev->window_fraction == doctest::Approx(1.0));
  CHECK(ev->window_samples == 5);
  CHECK(det.state() == EngagementState::engaged);
}

TEST_CASE("an immature window never votes") {
  DetectorConfig cfg;
  cfg.min_window_samples = 1;
  Detector det{cfg};
  // Full tablet evidence, but the page is younger than the engage window.
  CHECK_FALSE(det.feed(at(0.2, AoiLabel::tablet)).has_value());
  CHECK_FALSE(det.feed(at(0.8, AoiLabel::tablet)).has_value());
  CHECK(det.state() == EngagementState::idle);
}

TEST_CASE("thresholds are strict") {
  Detector det{DetectorConfig{}};
  // Two tablet then three elsewhere: fraction lands exactly on 0.4.
  det.feed(at(0.2, AoiLabel::tablet));
  det.feed(at(0.4, AoiLabel::tablet));
  det.feed(at(0.6, AoiLabel::elsewhere));
  det.feed(at(0.8, AoiLabel::elsewhere));
  CHECK_FALSE(det.feed(at(1.0, AoiLabel::elsewhere)).has_value());
  CHECK(det.state() == EngagementState::idle);
  // Sliding the window forward pushes the fraction past the threshold.
  CHECK_FALSE(det.feed(at(1.2, AoiLabel::tablet)).has_value());  // 2/5
  CHECK_FALSE(det.feed(at(1.4, AoiLabel::tablet)).has_value());  // 2/5
  const auto ev = det.feed(at(1.6, AoiLabel::tablet));           // 3/5
  REQUIRE(ev.has_value());
  CHECK(*ev->window_fraction == doctest::Approx(0.6));
}

TEST_CASE("sparse windows are ignored") {
  DetectorConfig cfg;
  cfg.min_window_samples = 6;
  Detector det{cfg};
  // 5 Hz can never put six samples inside a one-second window.
  for (int k = 1; k <= 50; ++k) {
    CHECK_FALSE(det.feed(at(k / 5.0, AoiLabel::tablet)).has_value());
  }
  CHECK(det.state() == EngagementState::idle);
}

TEST_CASE("a lone sample can engage when the floor allows it") {
  DetectorConfig cfg;
  cfg.engage_window_s = 0.4;
  cfg.disengage_window_s = 0.4;
  cfg.timeout_s = 2.0;
  cfg.min_window_samples = 1;
  Detector det{cfg};
  const auto ev = det.feed(at(0.4, AoiLabel::tablet));
  REQUIRE(ev.has_value());
  CHECK(ev->window_samples == 1);
  CHECK(*ev->window_fraction == doctest::Approx(1.0));
}

TEST_CASE("window membership excludes the sample exactly one window back") {
  DetectorConfig cfg;
  cfg.min_window_samples = 1;
  Detector det{cfg};
  det.feed(at(0.2, AoiLabel::tablet));
  // If 0.2 still counted, the fraction at 1.2 would be 1/2 > 0.4 and the
  // detector would engage; membership is (t - W, t], so it must not.
  CHECK_FALSE(det.feed(at(1.2, AoiLabel::elsewhere)).has_value());
  CHECK(det.state() == EngagementState::idle);

  Detector det2{cfg};
  det2.feed(at(0.3, AoiLabel::tablet));
  // 0.3 lies strictly inside (0.2, 1.2], so here the fraction is 1/2.
  const auto ev = det2.feed(at(1.2, AoiLabel::elsewhere));
  REQUIRE(ev.has_value());
  CHECK(*ev->window_fraction == doctest::Approx(0.5));
  CHECK(ev->window_samples == 2);
}

TEST_CASE("scripted shift disengages on unsmoothed labels") {
  Detector det{DetectorConfig{}};
  const std::vector<TimedGazePoint> labels = scripted_labels(6.0, 4.0);
  std::vector<TransitionEvent> events;
  for (const TimedGazePoint& p : labels) {
    if (auto ev = det.feed(p)) events.push_back(*ev);
  }
  REQUIRE(events.size() == 2);
  CHECK(events[0].timestamp == 1.0);
  CHECK(events[0].to == EngagementState::engaged);
  // Face labels start at 4.2; the face fraction first exceeds 0.5 at 4.6
  // (three of the five samples in (3.6, 4.6]).
  CHECK(events[1].timestamp == doctest::Approx(4.6));
  CHECK(events[1].to == EngagementState::disengaged);
  CHECK(events[1].cause == TransitionCause::gaze);
  CHECK(*events[1].window_fraction == doctest::Approx(0.6));
  CHECK(events[1].window_samples == 5);
  CHECK(det.state() == EngagementState::disengaged);
}

TEST_CASE("timeout fires at exactly the page budget") {
  Detector det{DetectorConfig{}};
  std::vector<TransitionEvent> events;
  for (int k = 1; k <= 55; ++k) {
    if (auto ev = det.feed(at(k / 5.0, AoiLabel::tablet))) {
      events.push_back(*ev);
    }
  }
  REQUIRE(events.size() == 2);
  CHECK(events[0].timestamp == 1.0);
  CHECK(events[1].timestamp == 10.0);
  CHECK(events[1].cause == TransitionCause::timeout);
  CHECK_FALSE(events[1].window_fraction.has_value());
  // The disengage window at 10.0 holds five samples, none of them face.
  CHECK(events[1].window_samples == 5);
}

TEST_CASE("timeout needs the engaged state") {
  Detector det{DetectorConfig{}};
  for (int k = 1; k <= 60; ++k) {
    CHECK_FALSE(det.feed(at(k / 5.0, AoiLabel::elsewhere)).has_value());
  }
  CHECK(det.state() == EngagementState::idle);
}

TEST_CASE("gaze shift wins over the timeout on the same sample") {
  DetectorConfig cfg;
  cfg.timeout_s = 2.0;
  Detector det{cfg};
  const AoiLabel seq[] = {AoiLabel::tablet,    AoiLabel::tablet,
                          AoiLabel::tablet,    AoiLabel::tablet,
                          AoiLabel::tablet,    AoiLabel::face,
                          AoiLabel::elsewhere, AoiLabel::elsewhere,
                          AoiLabel::face,      AoiLabel::face};
  std::vector<TransitionEvent> events;
  for (int k = 1; k <= 10; ++k) {
    if (auto ev = det.feed(at(k / 5.0, seq[k - 1]))) events.push_back(*ev);
  }
  // At t = 2.0 the face fraction reaches 3/5 just as the timeout matures;
  // the gaze cause must be the one reported.
  REQUIRE(events.size() == 2);
  CHECK(events[1].timestamp == 2.0);
  CHECK(events[1].cause == TransitionCause::gaze);
  CHECK(*events[1].window_fraction == doctest::Approx(0.6));
}

TEST_CASE("advance_page requires the disengaged state") {
  Detector det{DetectorConfig{}};
  CHECK_THROWS_AS(det.advance_page(1.0), StateError);
  for (int k = 1; k <= 5; ++k) det.feed(at(k / 5.0, AoiLabel::tablet));
  CHECK(det.state() == EngagementState::engaged);
  CHECK_THROWS_AS(det.advance_page(1.5), StateError);
}

TEST_CASE("advance_page restarts the page cleanly") {
  Detector det{DetectorConfig{}};
  feed_until_event(det, scripted_labels(1.0, 2.0));  // engage
  std::vector<TimedGazePoint> faces;
  for (int k = 6; k <= 9; ++k) faces.push_back(at(k / 5.0, AoiLabel::face));
  const auto dis = feed_until_event(det, faces);
  REQUIRE(dis.has_value());
  CHECK(dis->timestamp == doctest::Approx(1.6));

  const TransitionEvent reset = det.advance_page(dis->timestamp);
  CHECK(reset.timestamp == dis->timestamp);
  CHECK(reset.from == EngagementState::disengaged);
  CHECK(reset.to == EngagementState::idle);
  CHECK(reset.cause == TransitionCause::reset);
  CHECK_FALSE(reset.window_fraction.has_value());
  CHECK(reset.window_samples == 0);
  CHECK(det.state() == EngagementState::idle);
  CHECK(det.page_start() == dis->timestamp);

  // The cleared window means page two needs a full window of fresh samples.
  const double start = dis->timestamp;
  CHECK_FALSE(det.feed(at(start + 0.2, AoiLabel::tablet)).has_value());
  CHECK_FALSE(det.feed(at(start + 0.8, AoiLabel::tablet)).has_value());
  const auto ev = det.feed(at(start + 1.0, AoiLabel::tablet));
  REQUIRE(ev.has_value());
  CHECK(ev->window_samples == 3);
  CHECK(*ev->window_fraction == doctest::Approx(1.0));

  // Disengage once more, then try to move the page clock backwards.
  for (int k = 0; k < 5; ++k) {
    det.feed(at(start + 1.2 + 0.2 * k, AoiLabel::face));
  }
  REQUIRE(det.state() == EngagementState::disengaged);
  CHECK_THROWS_AS(det.advance_page(start - 0.5), OrderingError);
  CHECK_THROWS_AS(det.advance_page(std::nan("")), OrderingError);
  CHECK_NOTHROW(det.advance_page(start + 3.0));
  CHECK(det.state() == EngagementState::idle);
}

TEST_CASE("feed rejects non-increasing timestamps") {
  Detector det{DetectorConfig{}};
  det.feed(at(0.2, AoiLabel::tablet));
  CHECK_THROWS_AS(det.feed(at(0.2, AoiLabel::tablet)), OrderingError);
  CHECK_THROWS_AS(det.feed(at(0.1, AoiLabel::tablet)), OrderingError);
  CHECK_THROWS_AS(det.feed(at(std::nan(""), AoiLabel::tablet)),
                  OrderingError);
}

TEST_CASE("every length-8 label sequence matches the rescan oracle") {
  DetectorConfig cfg;
  cfg.engage_window_s = 1.0;
  cfg.disengage_window_s = 1.0;
  cfg.timeout_s = 2.5;
  cfg.min_window_samples = 2;

  const AoiLabel alphabet[] = {AoiLabel::tablet, AoiLabel::face,
                               AoiLabel::elsewhere};
  int mismatches = 0;
  for (int code = 0; code < 6561; ++code) {  // 3^8 sequences
    std::vector<TimedGazePoint> points;
    int rest = code;
    for (int k = 0; k < 8; ++k) {
      points.push_back(at(0.5 * (k + 1), alphabet[rest % 3]));
      rest /= 3;
    }

    const std::vector<TransitionEvent> expected =
        gazeflow::testing::naive_session_events(cfg, points);

    // Production detector with the same auto-advance contract.
    Detector det{cfg};
    std::vector<TransitionEvent> actual;
    for (const TimedGazePoint& p : points) {
      if (auto ev = det.feed(p)) {
        actual.push_back(*ev);
        if (ev->to == EngagementState::disengaged) {
          actual.push_back(det.advance_page(ev->timestamp));
        }
      }
    }

    bool same = actual.size() == expected.size();
    for (std::size_t i = 0; same && i < actual.size(); ++i) {
      same = actual[i].timestamp == expected[i].timestamp &&
             actual[i].from == expected[i].from &&
             actual[i].to == expected[i].to &&
             actual[i].cause == expected[i].cause &&
             actual[i].window_samples == expected[i].window_samples &&
             actual[i].window_fraction.has_value() ==
                 expected[i].window_fraction.has_value() &&
             (!actual[i].window_fraction ||
              std::abs(*actual[i].window_fraction -
                       *expected[i].window_fraction) < 1e-12);
    }
    if (!same) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("randomized label streams match the rescan oracle") {
  DetectorConfig cfg;
  cfg.engage_window_s = 1.5;
  cfg.disengage_window_s = 0.5;
  cfg.timeout_s = 2.0;
  cfg.min_window_samples = 1;
  cfg.engage_threshold = 0.5;
  cfg.disengage_threshold = 0.3;

  const AoiLabel alphabet[] = {AoiLabel::tablet, AoiLabel::face,
                               AoiLabel::elsewhere};
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TimedGazePoint> points;
    double t = 0.0;
    const int n = 20 + static_cast<int>(rng.raw() % 30);
    for (int k = 0; k < n; ++k) {
      t += rng.uniform(0.05, 0.45);
      points.push_back(at(t, alphabet[rng.raw() % 3]));
    }

    const std::vector<TransitionEvent> expected =
        gazeflow::testing::naive_session_events(cfg, points);
    Detector det{cfg};
    std::vector<TransitionEvent> actual;
    for (const TimedGazePoint& p : points) {
      if (auto ev = det.feed(p)) {
        actual.push_back(*ev);
        if (ev->to == EngagementState::disengaged) {
          actual.push_back(det.advance_page(ev->timestamp));
        }
      }
    }

    REQUIRE(actual.size() == expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      CHECK(actual[i].timestamp == expected[i].timestamp);
      CHECK(actual[i].from == expected[i].from);
      CHECK(actual[i].to == expected[i].to);
      CHECK(actual[i].cause == expected[i].cause);
      CHECK(actual[i].window_samples == expected[i].window_samples);
    }
  }
}
