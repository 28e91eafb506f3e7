#include "gazeflow/pipeline.hpp"

namespace gazeflow {

SessionPipeline::SessionPipeline(const DetectorConfig& config,
                                 const AoiLayout& layout,
                                 const SceneCalibration& calib)
    : labeler_(calib, layout, config.smooth_window), detector_(config) {}

PipelineStep SessionPipeline::feed(const GazeSample& sample) {
  PipelineStep step;
  step.point = labeler_.label(sample);
  if (auto event = detector_.feed(step.point)) {
    step.events[step.event_count++] = *event;
    if (event->to == EngagementState::disengaged) {
      step.events[step.event_count++] = detector_.advance_page(event->timestamp);
      labeler_.reset();
    }
  }
  return step;
}

std::vector<TransitionEvent> run_session(const DetectorConfig& config,
                                         const AoiLayout& layout,
                                         const SceneCalibration& calib,
                                         std::span<const GazeSample> samples) {
  SessionPipeline pipeline(config, layout, calib);
  std::vector<TransitionEvent> events;
  for (const GazeSample& sample : samples) {
    const PipelineStep step = pipeline.feed(sample);
    for (int i = 0; i < step.event_count; ++i) {
      events.push_back(step.events[i]);
    }
  }
  return events;
}

}  // namespace gazeflow
