#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gazeflow/detector.hpp"
#include "gazeflow/simulator.hpp"

namespace gazeflow {

// Sweep axes for the detector parameter search. Thresholds, the failsafe
// timeout, and the minimum window occupancy stay fixed across the sweep.
struct ParamGrid {
  std::vector<int> smooth_windows{1, 3, 5, 10, 15};
  std::vector<double> engage_windows_s{0.5, 1.0, 1.5, 2.0, 3.0};
  std::vector<double> disengage_windows_s{0.5, 1.0, 1.5, 2.0, 3.0};
  double engage_threshold = 0.4;
  double disengage_threshold = 0.5;
  double timeout_s = 10.0;
  int min_window_samples = 2;

  void validate() const;
  std::size_t cell_count() const;
};

struct GridCell {
  DetectorConfig config;
  int pages = 0;
  int correct = 0;
  int early = 0;
  int late = 0;
  int missed = 0;
  double accuracy = 0.0;  // correct / pages
  // Mean detection latency over correctly detected shifts; NaN if none.
  double mean_latency_s = std::numeric_limits<double>::quiet_NaN();
};

struct GridResult {
  std::vector<GridCell> cells;  // smooth-window major, disengage-window minor
  int sessions = 0;
  int pages_per_session = 0;
  double tolerance_s = 0.0;
  std::uint64_t seed = 0;
};

// Evaluates every grid cell against one shared cohort of simulated
// sessions. The cohort is generated once up front (session i uses seed
// `seed + i`), so every cell scores identical behavior and the result is
// deterministic regardless of thread count.
GridResult run_grid(const ParamGrid& grid, const BehaviorProfile& profile,
                    const SceneCalibration& calib, const AoiLayout& layout,
                    int n_sessions, int pages_per_session, double tolerance_s,
                    std::uint64_t seed, int threads = 0);

// Highest accuracy wins; ties fall to lower mean latency (NaN counts as
// infinite), then smaller disengage window, engage window, and smoothing
// window, in that order.
const GridCell& best_config(const GridResult& result);

void write_grid_csv(const std::string& path, const GridResult& result);

}  // namespace gazeflow
