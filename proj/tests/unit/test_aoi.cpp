#include <vector>

#include "doctest.h"

#include "gazeflow/aoi.hpp"
#include "gazeflow/config.hpp"
#include "gazeflow/errors.hpp"
#include "gazeflow/geometry.hpp"

using namespace gazeflow;

TEST_CASE("rect membership is half-open") {
  const AoiRect r(-10.0, 10.0, 0.0, 20.0);
  CHECK(r.contains({-10.0, 0.0}));
  CHECK(r.contains({0.0, 10.0}));
  CHECK_FALSE(r.contains({10.0, 10.0}));
  CHECK_FALSE(r.contains({0.0, 20.0}));
  CHECK_FALSE(r.contains({-10.001, 0.0}));
}

TEST_CASE("rect validation") {
  CHECK_THROWS_AS(AoiRect(5.0, 5.0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(AoiRect(5.0, -5.0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(AoiRect(0.0, 1.0, 3.0, 2.0), ConfigError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(AoiRect(0.0, inf, 0.0, 1.0), ConfigError);
}

TEST_CASE("layout rejects overlapping regions") {
  const AoiRect tablet(-120.0, 120.0, -450.0, -250.0);
  CHECK_THROWS_AS(AoiLayout(tablet, AoiRect(0.0, 50.0, -300.0, -100.0)),
                  ConfigError);
  // Rectangles sharing an edge are disjoint under half-open membership.
  CHECK_NOTHROW(AoiLayout(tablet, AoiRect(-120.0, 120.0, -250.0, -50.0)));
}

TEST_CASE("classify prefers tablet, then face") {
  const AoiLayout layout = default_layout();
  CHECK(classify(layout, {0.0, -350.0}) == AoiLabel::tablet);
  CHECK(classify(layout, {0.0, 0.0}) == AoiLabel::face);
  CHECK(classify(layout, {0.0, -200.0}) == AoiLabel::elsewhere);
  CHECK(classify(layout, {500.0, 0.0}) == AoiLabel::elsewhere);
}

TEST_CASE("label names round-trip") {
  CHECK(to_string(AoiLabel::tablet) == "Tablet");
  CHECK(to_string(AoiLabel::face) == "Face");
  CHECK(to_string(AoiLabel::elsewhere) == "Elsewhere");
  CHECK(aoi_label_from_string("Tablet") == AoiLabel::tablet);
  CHECK(aoi_label_from_string("Face") == AoiLabel::face);
  CHECK(aoi_label_from_string("Elsewhere") == AoiLabel::elsewhere);
  CHECK_THROWS_AS(aoi_label_from_string("tablet"), ParseError);
  CHECK_THROWS_AS(aoi_label_from_string(""), ParseError);
}

TEST_CASE("labeler maps aims to their regions") {
  const SceneCalibration calib = default_calibration();
  const AoiLayout layout = default_layout();
  GazeLabeler labeler(calib, layout, 1);

  const auto sample_at = [&](double t, const Point2D& target) {
    GazeSample s;
    s.timestamp = t;
    s.gaze = aim_at(calib, target);
    return s;
  };

  const TimedGazePoint on_tablet =
      labeler.label(sample_at(0.2, layout.tablet.center()));
  REQUIRE(on_tablet.point.has_value());
  CHECK(on_tablet.label == AoiLabel::tablet);
  CHECK(on_tablet.timestamp == 0.2);

  const TimedGazePoint on_face =
      labeler.label(sample_at(0.4, layout.face.center()));
  CHECK(on_face.label == AoiLabel::face);

  const TimedGazePoint off_screen =
      labeler.label(sample_at(0.6, {900.0, 700.0}));
  CHECK(off_screen.label == AoiLabel::elsewhere);
}

TEST_CASE("gaze away from the display labels elsewhere with no point") {
  const SceneCalibration calib = default_calibration();
  GazeLabeler labeler(calib, default_layout(), 1);
  // Yaw pi flips the ray to camera-frame -z, away from the screen under
  // the default pose.
  GazeSample s;
  s.timestamp = 0.1;
  s.gaze = EulerGaze(kPi, 0.0);
  const TimedGazePoint p = labeler.label(s);
  CHECK_FALSE(p.point.has_value());
  CHECK(p.label == AoiLabel::elsewhere);
}

TEST_CASE("label_stream preserves length and timestamps") {
  const SceneCalibration calib = default_calibration();
  const AoiLayout layout = default_layout();
  std::vector<GazeSample> samples;
  for (int k = 1; k <= 10; ++k) {
    GazeSample s;
    s.timestamp = 0.2 * k;
    s.gaze = aim_at(calib, layout.tablet.center());
    samples.push_back(s);
  }
  const std::vector<TimedGazePoint> labeled =
      label_stream(layout, calib, 3, samples);
  REQUIRE(labeled.size() == samples.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    CHECK(labeled[i].timestamp == samples[i].timestamp);
    CHECK(labeled[i].label == AoiLabel::tablet);
  }
}
