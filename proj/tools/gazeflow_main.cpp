// Command-line front end: replay, simulate, optimize, analyze, serve.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gazeflow/analytics.hpp"
#include "gazeflow/config.hpp"
#include "gazeflow/optimizer.hpp"
#include "gazeflow/pipeline.hpp"
#include "gazeflow/service.hpp"
#include "gazeflow/session_log.hpp"
#include "gazeflow/simulator.hpp"

namespace {

using namespace gazeflow;

std::string session_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "session_%03d", index);
  return buf;
}

AppConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return AppConfig{};
  return load_app_config(path);
}

ParamGrid load_grid_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  ParamGrid grid;
  const auto read_doubles = [&](const char* field, std::vector<double>& out) {
    if (!j.contains(field)) return;
    if (!j.at(field).is_array() || j.at(field).empty()) {
      throw ConfigError(path + ": '" + field +
                        "' must be a non-empty array of numbers");
    }
    out.clear();
    for (const auto& v : j.at(field)) {
      if (!v.is_number()) {
        throw ConfigError(path + ": '" + field + "' must contain numbers");
      }
      out.push_back(v.get<double>());
    }
  };
  if (j.contains("smooth_windows")) {
    if (!j.at("smooth_windows").is_array() || j.at("smooth_windows").empty()) {
      throw ConfigError(path + ": 'smooth_windows' must be a non-empty array");
    }
    grid.smooth_windows.clear();
    for (const auto& v : j.at("smooth_windows")) {
      if (!v.is_number_integer()) {
        throw ConfigError(path + ": 'smooth_windows' must contain integers");
      }
      grid.smooth_windows.push_back(v.get<int>());
    }
  }
  read_doubles("engage_windows_s", grid.engage_windows_s);
  read_doubles("disengage_windows_s", grid.disengage_windows_s);
  if (j.contains("engage_threshold")) {
    grid.engage_threshold = j.at("engage_threshold").get<double>();
  }
  if (j.contains("disengage_threshold")) {
    grid.disengage_threshold = j.at("disengage_threshold").get<double>();
  }
  if (j.contains("timeout_s")) {
    grid.timeout_s = j.at("timeout_s").get<double>();
  }
  if (j.contains("min_window_samples")) {
    grid.min_window_samples = j.at("min_window_samples").get<int>();
  }
  return grid;
}

int run_replay(const std::string& config_path, const std::string& input_path,
               const std::string& events_out) {
  const AppConfig config = load_config_or_default(config_path);
  const SampleLog log = read_sample_log(input_path);

  SessionPipeline pipeline(config.detector, config.layout, config.calibration);
  std::vector<TransitionEvent> events;
  for (const LoggedSample& s : log.samples) {
    const PipelineStep step = pipeline.feed(s.sample);
    for (int i = 0; i < step.event_count; ++i) events.push_back(step.events[i]);
  }
  if (events_out.empty()) {
    write_event_log(std::cout, events);
  } else {
    write_event_log(events_out, events);
    std::cerr << "replayed " << log.samples.size() << " samples, "
              << events.size() << " events -> " << events_out << "\n";
  }
  return 0;
}

int run_simulate(const std::string& config_path,
                 const std::string& profile_path, int sessions, int pages,
                 std::uint64_t seed, const std::string& out_dir) {
  const AppConfig config = load_config_or_default(config_path);
  const BehaviorProfile profile =
      profile_path.empty() ? BehaviorProfile{} : load_profile(profile_path);

  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < sessions; ++i) {
    const GeneratedSession session =
        generate_session(profile, config.calibration, config.layout, pages,
                         seed + static_cast<std::uint64_t>(i));
    std::vector<LoggedSample> rows;
    rows.reserve(session.samples.size());
    for (const GazeSample& s : session.samples) {
      rows.push_back({s, std::nullopt});
    }
    const std::string stem =
        (std::filesystem::path(out_dir) / session_stem(i)).string();
    write_sample_log(stem + ".samples.ndjson", rows);
    write_truth_json(stem + ".truth.json", session);
  }
  std::cout << "wrote " << sessions << " sessions to " << out_dir << "\n";
  return 0;
}

int run_optimize(const std::string& config_path,
                 const std::string& profile_path, const std::string& grid_path,
                 int trials, int pages, double tolerance, std::uint64_t seed,
                 int threads, const std::string& out_csv) {
  const AppConfig config = load_config_or_default(config_path);
  const BehaviorProfile profile =
      profile_path.empty() ? BehaviorProfile{} : load_profile(profile_path);
  const ParamGrid grid =
      grid_path.empty() ? ParamGrid{} : load_grid_json(grid_path);

  const GridResult result =
      run_grid(grid, profile, config.calibration, config.layout, trials, pages,
               tolerance, seed, threads);
  write_grid_csv(out_csv, result);

  const GridCell& best = best_config(result);
  char line[256];
  std::snprintf(line, sizeof(line),
                "best: smooth_window=%d engage_window_s=%.1f "
                "disengage_window_s=%.1f accuracy=%.3f mean_latency_s=%.3f",
                best.config.smooth_window, best.config.engage_window_s,
                best.config.disengage_window_s, best.accuracy,
                best.mean_latency_s);
  std::cout << result.cells.size() << " cells, " << trials << " sessions x "
            << pages << " pages -> " << out_csv << "\n"
            << line << "\n";
  return 0;
}

int run_analyze(const std::string& config_path,
                const std::vector<std::string>& event_paths,
                const std::string& input_path, const std::string& heatmap_csv,
                const std::string& heatmap_pgm, int heatmap_cols,
                int heatmap_rows) {
  const AppConfig config = load_config_or_default(config_path);

  std::vector<SessionReport> reports;
  for (const std::string& path : event_paths) {
    const EventLog log = read_event_log(path);
    const SessionReport report = session_report(log.events);
    reports.push_back(report);
    char line[256];
    std::snprintf(line, sizeof(line),
                  "pages=%d engagements=%d gaze=%d timeout=%d "
                  "mean_page_s=%.2f mean_engage_latency_s=%.2f",
                  report.pages_completed, report.engagements,
                  report.gaze_disengagements, report.timeout_disengagements,
                  report.mean_page_duration_s, report.mean_engage_latency_s);
    std::cout << path << ": " << line << "\n";
  }
  if (reports.size() > 1) {
    const CorpusReport corpus = corpus_report(reports);
    char line[256];
    std::snprintf(line, sizeof(line),
                  "corpus: sessions=%d pages=%d mean_page_s=%.2f "
                  "median_page_s=%.2f",
                  corpus.sessions, corpus.total_pages,
                  corpus.mean_page_duration_s, corpus.median_page_duration_s);
    std::cout << line << "\n";
  }

  if (!input_path.empty()) {
    const SampleLog log = read_sample_log(input_path);
    std::vector<GazeSample> samples;
    samples.reserve(log.samples.size());
    for (const LoggedSample& s : log.samples) samples.push_back(s.sample);
    // Continuous labeling, no page resets: dwell and heatmaps describe the
    // whole stream.
    const std::vector<TimedGazePoint> points =
        label_stream(config.layout, config.calibration,
                     config.detector.smooth_window, samples);

    const DwellStats dwell = dwell_stats(points);
    for (const AoiLabel label :
         {AoiLabel::tablet, AoiLabel::face, AoiLabel::elsewhere}) {
      const auto i = static_cast<std::size_t>(label);
      char line[128];
      std::snprintf(line, sizeof(line), "dwell %s: %.2fs over %d samples",
                    std::string(to_string(label)).c_str(), dwell.seconds[i],
                    dwell.samples[i]);
      std::cout << line << "\n";
    }

    if (!heatmap_csv.empty() || !heatmap_pgm.empty()) {
      const AoiLayout& layout = config.layout;
      const double margin = 150.0;
      const HeatmapBounds bounds{
          std::min(layout.tablet.x_min, layout.face.x_min) - margin,
          std::max(layout.tablet.x_max, layout.face.x_max) + margin,
          std::min(layout.tablet.y_min, layout.face.y_min) - margin,
          std::max(layout.tablet.y_max, layout.face.y_max) + margin};
      const HeatmapGrid grid =
          heatmap(points, bounds, heatmap_cols, heatmap_rows);
      if (!heatmap_csv.empty()) write_heatmap_csv(heatmap_csv, grid);
      if (!heatmap_pgm.empty()) write_heatmap_pgm(heatmap_pgm, grid);
      std::cout << "heatmap: " << grid.total - grid.out_of_bounds << " of "
                << grid.total << " points on grid\n";
    }
  }
  return 0;
}

std::atomic<bool> g_stop_requested{false};

void handle_stop_signal(int) { g_stop_requested.store(true); }

int run_serve(const std::string& config_path, int port_override) {
  AppConfig config = load_config_or_default(config_path);
  if (port_override >= 0) config.service.port = port_override;

  StreamServer server(config);
  server.start();
  std::cout << "listening on " << config.service.host << ":" << server.port()
            << std::endl;

  struct sigaction sa{};
  sa.sa_handler = handle_stop_signal;
  ::sigaction(SIGINT, &sa, nullptr);
  ::sigaction(SIGTERM, &sa, nullptr);
  while (!g_stop_requested.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  server.stop();
  std::cout << "stopped" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaze engagement pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  std::string config_path;
  std::string input_path;
  std::string events_out;
  std::string profile_path;
  std::string grid_path;
  std::string out_path;
  std::vector<std::string> event_paths;
  std::string heatmap_csv;
  std::string heatmap_pgm;
  int heatmap_cols = 32;
  int heatmap_rows = 32;
  int sessions = 8;
  int pages = 6;
  int trials = 20;
  int threads = 0;
  int port_override = -1;
  double tolerance = 0.0;
  std::uint64_t seed = 1;

  const auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file")
        ->envname("GAZEFLOW_CONFIG");
  };

  CLI::App* replay = app.add_subcommand(
      "replay", "Run a recorded sample log through the pipeline");
  add_config(replay);
  replay->add_option("--input", input_path, "samples NDJSON file")->required();
  replay->add_option("--events-out", events_out,
                     "write events here instead of stdout");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate synthetic session logs");
  add_config(simulate);
  simulate->add_option("--profile", profile_path, "behavior profile JSON");
  simulate->add_option("--sessions", sessions, "number of sessions")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--pages", pages, "pages per session")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "base RNG seed (session i adds i)");
  simulate->add_option("--out", out_path, "output directory")->required();

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Sweep detector parameters over simulated sessions");
  add_config(optimize);
  optimize->add_option("--profile", profile_path, "behavior profile JSON");
  optimize->add_option("--grid", grid_path, "grid axes JSON");
  optimize->add_option("--trials", trials, "sessions in the cohort")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--pages", pages, "pages per session")
      ->check(CLI::PositiveNumber);
  optimize
      ->add_option("--tolerance", tolerance,
                   "max latency (s) still scored correct")
      ->required();
  optimize->add_option("--seed", seed, "base RNG seed");
  optimize->add_option("--threads", threads, "worker threads (0 = all cores)");
  optimize->add_option("--out", out_path, "grid CSV output path")->required();

  CLI::App* analyze =
      app.add_subcommand("analyze", "Summarize event and sample logs");
  add_config(analyze);
  analyze->add_option("--events", event_paths, "events NDJSON file(s)")
      ->required();
  analyze->add_option("--input", input_path,
                      "samples NDJSON for dwell/heatmap analysis");
  analyze->add_option("--heatmap-out", heatmap_csv, "heatmap CSV path");
  analyze->add_option("--heatmap-pgm", heatmap_pgm, "heatmap PGM path");
  analyze->add_option("--heatmap-cols", heatmap_cols, "heatmap columns")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--heatmap-rows", heatmap_rows, "heatmap rows")
      ->check(CLI::PositiveNumber);

  CLI::App* serve =
      app.add_subcommand("serve", "Stream samples in over TCP, events out");
  add_config(serve);
  serve->add_option("--port", port_override,
                    "override the configured port (0 = ephemeral)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (replay->parsed()) {
      return run_replay(config_path, input_path, events_out);
    }
    if (simulate->parsed()) {
      return run_simulate(config_path, profile_path, sessions, pages, seed,
                          out_path);
    }
    if (optimize->parsed()) {
      return run_optimize(config_path, profile_path, grid_path, trials, pages,
                          tolerance, seed, threads, out_path);
    }
    if (analyze->parsed()) {
      return run_analyze(config_path, event_paths, input_path, heatmap_csv,
                         heatmap_pgm, heatmap_cols, heatmap_rows);
    }
    if (serve->parsed()) {
      return run_serve(config_path, port_override);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
