#pragma once

#include <array>
#include <span>
#include <vector>

#include "gazeflow/aoi.hpp"
#include "gazeflow/detector.hpp"

namespace gazeflow {

// One pipeline step: the labeled point plus zero, one, or two transitions
// (a disengagement is immediately followed by the page-turn reset).
struct PipelineStep {
  TimedGazePoint point{0.0, std::nullopt, AoiLabel::elsewhere};
  std::array<TransitionEvent, 2> events{};
  int event_count = 0;
};

// Smoothing + projection + AOI labeling + engagement detection over one
// sample stream. Pages advance automatically: every disengagement emits the
// matching reset at the same timestamp and clears the smoothing buffer, so
// stale gaze never bleeds across a page turn. Replay, simulation scoring,
// and the live service all run sessions through this class.
class SessionPipeline {
 public:
  SessionPipeline(const DetectorConfig& config, const AoiLayout& layout,
                  const SceneCalibration& calib);

  PipelineStep feed(const GazeSample& sample);

  EngagementState state() const { return detector_.state(); }
  const Detector& detector() const { return detector_; }

 private:
  GazeLabeler labeler_;
  Detector detector_;
};

// Runs a whole sample stream through a fresh pipeline and returns every
// transition in order.
std::vector<TransitionEvent> run_session(const DetectorConfig& config,
                                         const AoiLayout& layout,
                                         const SceneCalibration& calib,
                                         std::span<const GazeSample> samples);

}  // namespace gazeflow
