#include <benchmark/benchmark.h>

#include <vector>

#include "gazeflow/config.hpp"
#include "gazeflow/pipeline.hpp"
#include "gazeflow/simulator.hpp"

namespace {

using namespace gazeflow;

std::vector<GazeSample> make_samples(std::size_t n) {
  BehaviorProfile profile;
  const GeneratedSession session = generate_session(
      profile, default_calibration(), default_layout(),
      static_cast<int>(n / 50 + 1), 42);
  std::vector<GazeSample> samples = session.samples;
  // Extend by shifting copies in time until we have n samples.
  const double span = session.end_s;
  std::size_t i = 0;
  while (samples.size() < n) {
    GazeSample s = samples[i % session.samples.size()];
    s.timestamp += span * (1 + i / session.samples.size());
    samples.push_back(s);
    ++i;
  }
  samples.resize(n);
  return samples;
}

void BM_ProjectToScreen(benchmark::State& state) {
  const SceneCalibration calib = default_calibration();
  const EulerGaze gaze = aim_at(calib, {40.0, -300.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_to_screen(calib, gaze));
  }
}
BENCHMARK(BM_ProjectToScreen);

void BM_SmoothingPush(benchmark::State& state) {
  const std::vector<GazeSample> samples = make_samples(4096);
  SmoothingBuffer buffer(static_cast<int>(state.range(0)));
  std::size_t i = 0;
  double t = 0.0;
  for (auto _ : state) {
    GazeSample s = samples[i++ & 4095];
    s.timestamp = (t += 0.2);
    benchmark::DoNotOptimize(buffer.push_and_smooth(s));
  }
}
BENCHMARK(BM_SmoothingPush)->Arg(3)->Arg(15);

void BM_DetectorFeed(benchmark::State& state) {
  DetectorConfig config;
  config.timeout_s = 1e12;  // keep the one-page detector from disengaging
  Detector detector(config);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        detector.feed({t += 0.2, std::nullopt, AoiLabel::elsewhere}));
  }
}
BENCHMARK(BM_DetectorFeed);

void BM_PipelineFeed(benchmark::State& state) {
  const std::vector<GazeSample> samples = make_samples(65536);
  DetectorConfig config;
  SessionPipeline pipeline(config, default_layout(), default_calibration());
  std::size_t i = 0;
  double t = 0.0;
  for (auto _ : state) {
    GazeSample s = samples[i++ & 65535];
    s.timestamp = (t += 0.2);
    benchmark::DoNotOptimize(pipeline.feed(s));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PipelineFeed);

}  // namespace

BENCHMARK_MAIN();
