#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gazeflow/aoi.hpp"
#include "gazeflow/detector.hpp"

namespace gazeflow {

// Per-AOI sample counts and dwell time. Each sample's dwell is the gap to
// the previous sample; the first sample contributes no time.
struct DwellStats {
  std::array<int, 3> samples{};      // indexed by AoiLabel
  std::array<double, 3> seconds{};   // indexed by AoiLabel
  int total_samples = 0;
  double total_seconds = 0.0;
};

DwellStats dwell_stats(std::span<const TimedGazePoint> points);

struct HeatmapBounds {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

// Screen-plane hit histogram. Cells bin [x_min, x_max) x [y_min, y_max)
// half-open; row 0 is the top edge (y_max) so dumps read like an image.
// Points outside the bounds, and points with no screen position at all,
// land in out_of_bounds; total always equals the sum of every cell plus
// out_of_bounds.
struct HeatmapGrid {
  HeatmapBounds bounds;
  int cols = 0;
  int rows = 0;
  std::vector<std::int64_t> counts;  // row-major, rows * cols
  std::int64_t out_of_bounds = 0;
  std::int64_t total = 0;

  std::int64_t at(int row, int col) const {
    return counts[static_cast<std::size_t>(row) *
                      static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(col)];
  }
};

HeatmapGrid heatmap(std::span<const TimedGazePoint> points,
                    const HeatmapBounds& bounds, int cols, int rows);

// '#'-prefixed metadata lines, then one CSV row of counts per grid row,
// top row first.
void write_heatmap_csv(const std::string& path, const HeatmapGrid& grid);

// Plain-text PGM (P2), counts scaled to a 0..255 grey ramp.
void write_heatmap_pgm(const std::string& path, const HeatmapGrid& grid);

// Transition-stream digest for one session. Page boundaries come from the
// reset events; the first page is measured from time zero.
struct SessionReport {
  int engagements = 0;
  int gaze_disengagements = 0;
  int timeout_disengagements = 0;
  int pages_completed = 0;
  std::vector<double> page_durations_s;
  double mean_page_duration_s = std::numeric_limits<double>::quiet_NaN();
  double mean_engage_latency_s = std::numeric_limits<double>::quiet_NaN();
};

SessionReport session_report(std::span<const TransitionEvent> events);

struct CorpusReport {
  int sessions = 0;
  int total_pages = 0;
  double mean_pages_per_session = std::numeric_limits<double>::quiet_NaN();
  double mean_page_duration_s = std::numeric_limits<double>::quiet_NaN();
  double median_page_duration_s = std::numeric_limits<double>::quiet_NaN();
};

CorpusReport corpus_report(std::span<const SessionReport> reports);

}  // namespace gazeflow
