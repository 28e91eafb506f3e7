#include "gazeflow/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace gazeflow {

DwellStats dwell_stats(std::span<const TimedGazePoint> points) {
  DwellStats stats;
  std::optional<double> last_t;
  for (const TimedGazePoint& p : points) {
    const auto i = static_cast<std::size_t>(p.label);
    ++stats.samples[i];
    ++stats.total_samples;
    if (last_t) {
      const double dt = p.timestamp - *last_t;
      stats.seconds[i] += dt;
      stats.total_seconds += dt;
    }
    last_t = p.timestamp;
  }
  return stats;
}

HeatmapGrid heatmap(std::span<const TimedGazePoint> points,
                    const HeatmapBounds& bounds, int cols, int rows) {
  if (cols < 1 || rows < 1) {
    throw ConfigError("heatmap needs at least one row and one column");
  }
  if (!(bounds.x_min < bounds.x_max) || !(bounds.y_min < bounds.y_max)) {
    throw ConfigError("heatmap bounds must satisfy min < max");
  }
  HeatmapGrid grid;
  grid.bounds = bounds;
  grid.cols = cols;
  grid.rows = rows;
  grid.counts.assign(static_cast<std::size_t>(cols) *
                         static_cast<std::size_t>(rows),
                     0);
  const double w = bounds.x_max - bounds.x_min;
  const double h = bounds.y_max - bounds.y_min;
  for (const TimedGazePoint& p : points) {
    ++grid.total;
    if (!p.point) {
      ++grid.out_of_bounds;
      continue;
    }
    const double x = p.point->x;
    const double y = p.point->y;
    if (x < bounds.x_min || x >= bounds.x_max || y < bounds.y_min ||
        y >= bounds.y_max) {
      ++grid.out_of_bounds;
      continue;
    }
    const int col = std::min(
        cols - 1, static_cast<int>((x - bounds.x_min) / w * cols));
    // Row 0 holds the top edge; y is measured upward.
    const int row = std::min(
        rows - 1, static_cast<int>((bounds.y_max - y) / h * rows));
    ++grid.counts[static_cast<std::size_t>(row) *
                      static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(col)];
  }
  return grid;
}

void write_heatmap_csv(const std::string& path, const HeatmapGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << "# gaze heatmap, counts per cell, top row first\n";
  out << "# bounds_mm " << grid.bounds.x_min << ' ' << grid.bounds.x_max << ' '
      << grid.bounds.y_min << ' ' << grid.bounds.y_max << '\n';
  out << "# cols " << grid.cols << " rows " << grid.rows << " out_of_bounds "
      << grid.out_of_bounds << " total " << grid.total << '\n';
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (c > 0) out << ',';
      out << grid.at(r, c);
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

void write_heatmap_pgm(const std::string& path, const HeatmapGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  std::int64_t peak = 0;
  for (const std::int64_t c : grid.counts) peak = std::max(peak, c);
  out << "P2\n" << grid.cols << ' ' << grid.rows << "\n255\n";
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (c > 0) out << ' ';
      const std::int64_t v = grid.at(r, c);
      out << (peak > 0 ? (v * 255 + peak / 2) / peak : 0);
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

SessionReport session_report(std::span<const TransitionEvent> events) {
  SessionReport report;
  double page_start = 0.0;
  double engage_latency_sum = 0.0;
  for (const TransitionEvent& e : events) {
    if (e.to == EngagementState::engaged) {
      ++report.engagements;
      engage_latency_sum += e.timestamp - page_start;
    } else if (e.to == EngagementState::disengaged) {
      if (e.cause == TransitionCause::timeout) {
        ++report.timeout_disengagements;
      } else {
        ++report.gaze_disengagements;
      }
    } else if (e.cause == TransitionCause::reset) {
      ++report.pages_completed;
      report.page_durations_s.push_back(e.timestamp - page_start);
      page_start = e.timestamp;
    }
  }
  if (!report.page_durations_s.empty()) {
    double sum = 0.0;
    for (const double d : report.page_durations_s) sum += d;
    report.mean_page_duration_s =
        sum / static_cast<double>(report.page_durations_s.size());
  }
  if (report.engagements > 0) {
    report.mean_engage_latency_s = engage_latency_sum / report.engagements;
  }
  return report;
}

CorpusReport corpus_report(std::span<const SessionReport> reports) {
  CorpusReport corpus;
  corpus.sessions = static_cast<int>(reports.size());
  std::vector<double> durations;
  for (const SessionReport& r : reports) {
    corpus.total_pages += r.pages_completed;
    durations.insert(durations.end(), r.page_durations_s.begin(),
                     r.page_durations_s.end());
  }
  if (corpus.sessions > 0) {
    corpus.mean_pages_per_session =
        static_cast<double>(corpus.total_pages) / corpus.sessions;
  }
  if (!durations.empty()) {
    double sum = 0.0;
    for (const double d : durations) sum += d;
    corpus.mean_page_duration_s = sum / static_cast<double>(durations.size());
    std::sort(durations.begin(), durations.end());
    const std::size_t n = durations.size();
    corpus.median_page_duration_s =
        n % 2 == 1 ? durations[n / 2]
                   : 0.5 * (durations[n / 2 - 1] + durations[n / 2]);
  }
  return corpus;
}

}  // namespace gazeflow
