#include "gazeflow/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "gazeflow/pipeline.hpp"

namespace gazeflow {

void ParamGrid::validate() const {
  if (smooth_windows.empty() || engage_windows_s.empty() ||
      disengage_windows_s.empty()) {
    throw ConfigError("grid axes must be non-empty");
  }
  // Per-cell constraints (window positivity, timeout ordering) are enforced
  // by DetectorConfig::validate when the cell is built.
}

std::size_t ParamGrid::cell_count() const {
  return smooth_windows.size() * engage_windows_s.size() *
         disengage_windows_s.size();
}

namespace {

DetectorConfig cell_config(const ParamGrid& grid, int smooth_window,
                           double engage_window_s, double disengage_window_s) {
  DetectorConfig config;
  config.smooth_window = smooth_window;
  config.engage_window_s = engage_window_s;
  config.disengage_window_s = disengage_window_s;
  config.engage_threshold = grid.engage_threshold;
  config.disengage_threshold = grid.disengage_threshold;
  config.timeout_s = grid.timeout_s;
  config.min_window_samples = grid.min_window_samples;
  config.validate();
  return config;
}

void score_cell(GridCell& cell, const std::vector<GeneratedSession>& sessions,
                const SceneCalibration& calib, const AoiLayout& layout,
                double tolerance_s) {
  double latency_sum = 0.0;
  int latency_count = 0;
  for (const GeneratedSession& session : sessions) {
    const std::vector<TransitionEvent> events =
        run_session(cell.config, layout, calib, session.samples);
    const std::vector<PageEvaluation> evals =
        evaluate_detection(session.pages, events, tolerance_s);
    for (const PageEvaluation& eval : evals) {
      ++cell.pages;
      switch (eval.outcome) {
        case DetectionOutcome::correct:
          ++cell.correct;
          if (eval.had_shift) {
            latency_sum += eval.latency_s;
            ++latency_count;
          }
          break;
        case DetectionOutcome::early:
          ++cell.early;
          break;
        case DetectionOutcome::late:
          ++cell.late;
          break;
        case DetectionOutcome::missed:
          ++cell.missed;
          break;
      }
    }
  }
  cell.accuracy =
      cell.pages > 0 ? static_cast<double>(cell.correct) / cell.pages : 0.0;
  if (latency_count > 0) {
    cell.mean_latency_s = latency_sum / latency_count;
  }
}

}  // namespace

GridResult run_grid(const ParamGrid& grid, const BehaviorProfile& profile,
                    const SceneCalibration& calib, const AoiLayout& layout,
                    int n_sessions, int pages_per_session, double tolerance_s,
                    std::uint64_t seed, int threads) {
  grid.validate();
  profile.validate();
  if (n_sessions < 1) {
    throw ConfigError("n_sessions must be at least 1");
  }
  if (pages_per_session < 1) {
    throw ConfigError("pages_per_session must be at least 1");
  }

  std::vector<GeneratedSession> sessions;
  sessions.reserve(static_cast<std::size_t>(n_sessions));
  for (int i = 0; i < n_sessions; ++i) {
    sessions.push_back(generate_session(profile, calib, layout,
                                        pages_per_session,
                                        seed + static_cast<std::uint64_t>(i)));
  }

  GridResult result;
  result.sessions = n_sessions;
  result.pages_per_session = pages_per_session;
  result.tolerance_s = tolerance_s;
  result.seed = seed;
  result.cells.reserve(grid.cell_count());
  for (const int n : grid.smooth_windows) {
    for (const double we : grid.engage_windows_s) {
      for (const double wd : grid.disengage_windows_s) {
        GridCell cell;
        cell.config = cell_config(grid, n, we, wd);
        result.cells.push_back(cell);
      }
    }
  }

  int n_threads = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads,
                                        static_cast<int>(result.cells.size())));

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= result.cells.size()) return;
      score_cell(result.cells[i], sessions, calib, layout, tolerance_s);
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return result;
}

const GridCell& best_config(const GridResult& result) {
  if (result.cells.empty()) {
    throw ConfigError("grid result has no cells");
  }
  const auto latency_key = [](const GridCell& c) {
    return std::isnan(c.mean_latency_s)
               ? std::numeric_limits<double>::infinity()
               : c.mean_latency_s;
  };
  const GridCell* best = &result.cells.front();
  for (const GridCell& cell : result.cells) {
    if (cell.accuracy > best->accuracy) {
      best = &cell;
      continue;
    }
    if (cell.accuracy < best->accuracy) continue;
    const auto key = [&](const GridCell& c) {
      return std::tuple(latency_key(c), c.config.disengage_window_s,
                        c.config.engage_window_s, c.config.smooth_window);
    };
    if (key(cell) < key(*best)) best = &cell;
  }
  return *best;
}

void write_grid_csv(const std::string& path, const GridResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << "smooth_window,engage_window_s,disengage_window_s,pages,correct,"
         "early,late,missed,accuracy,mean_latency_s\n";
  char line[256];
  for (const GridCell& cell : result.cells) {
    std::snprintf(line, sizeof(line),
                  "%d,%.6f,%.6f,%d,%d,%d,%d,%d,%.6f,%.6f\n",
                  cell.config.smooth_window, cell.config.engage_window_s,
                  cell.config.disengage_window_s, cell.pages, cell.correct,
                  cell.early, cell.late, cell.missed, cell.accuracy,
                  cell.mean_latency_s);
    out << line;
  }
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

}  // namespace gazeflow
