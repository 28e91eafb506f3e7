#include "gazeflow/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace gazeflow {
namespace {

constexpr double kMissBandWidthMm = 60.0;
constexpr double kMinMissMarginMm = 15.0;
constexpr double kGlanceSigma = 0.25;  // lognormal shape of glance length

// Uniform point in the band between the rect grown by `margin` and the rect
// grown by `margin + band`.
Point2D sample_miss_point(Rng& rng, const AoiRect& rect, double margin,
                          double band) {
  const double ix0 = rect.x_min - margin;
  const double ix1 = rect.x_max + margin;
  const double iy0 = rect.y_min - margin;
  const double iy1 = rect.y_max + margin;
  for (;;) {
    const double x = rng.uniform(ix0 - band, ix1 + band);
    const double y = rng.uniform(iy0 - band, iy1 + band);
    if (x < ix0 || x >= ix1 || y < iy0 || y >= iy1) return {x, y};
  }
}

}  // namespace

double Rng::normal(double mean, double stddev) {
  const double u1 = 1.0 - uniform01();  // (0, 1]; keeps the log finite
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * kPi * u2);
}

double Rng::log_normal_median(double median, double sigma) {
  return std::exp(normal(std::log(median), sigma));
}

void BehaviorProfile::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(sample_rate_hz)) {
    throw ConfigError("sample_rate_hz must be positive");
  }
  if (!positive(read_time_median_s)) {
    throw ConfigError("read_time_median_s must be positive");
  }
  if (!std::isfinite(read_time_sigma) || read_time_sigma < 0.0) {
    throw ConfigError("read_time_sigma must be non-negative");
  }
  if (!positive(face_hold_s)) {
    throw ConfigError("face_hold_s must be positive");
  }
  if (!positive(page_timeout_s)) {
    throw ConfigError("page_timeout_s must be positive");
  }
  if (!std::isfinite(shift_probability) || shift_probability < 0.0 ||
      shift_probability > 1.0) {
    throw ConfigError("shift_probability must lie in [0, 1]");
  }
  if (!std::isfinite(tablet_tpr) || tablet_tpr < 0.0 || tablet_tpr > 1.0) {
    throw ConfigError("tablet_tpr must lie in [0, 1]");
  }
  if (!std::isfinite(face_tpr) || face_tpr < 0.0 || face_tpr > 1.0) {
    throw ConfigError("face_tpr must lie in [0, 1]");
  }
  if (!std::isfinite(noise_deg) || noise_deg < 0.0) {
    throw ConfigError("noise_deg must be non-negative");
  }
  if (!std::isfinite(glance_rate_hz) || glance_rate_hz < 0.0) {
    throw ConfigError("glance_rate_hz must be non-negative");
  }
  if (!positive(glance_hold_s)) {
    throw ConfigError("glance_hold_s must be positive");
  }
  if (!std::isfinite(return_lag_s) || return_lag_s < 0.0) {
    throw ConfigError("return_lag_s must be non-negative");
  }
}

GeneratedSession generate_session(const BehaviorProfile& profile,
                                  const SceneCalibration& calib,
                                  const AoiLayout& layout, int n_pages,
                                  std::uint64_t seed) {
  profile.validate();
  if (n_pages < 1) {
    throw ConfigError("a session needs at least one page");
  }

  Rng rng(seed);
  GeneratedSession out;
  out.seed = seed;

  const double dt = 1.0 / profile.sample_rate_hz;
  double t = 0.0;
  for (int p = 0; p < n_pages; ++p) {
    PageTruth page;
    page.index = p;
    page.start_s = t;
    if (rng.bernoulli(profile.shift_probability)) {
      const double read = std::max(
          rng.log_normal_median(profile.read_time_median_s,
                                profile.read_time_sigma),
          dt);
      page.shift_s = t + read;
      t += read + profile.face_hold_s;
    } else {
      t += profile.page_timeout_s;
    }
    out.pages.push_back(page);
  }
  out.end_s = t;

  const double noise_rad = deg_to_rad(profile.noise_deg);
  const ScreenPlane plane = screen_plane(calib);
  const Vec3 eye = eye_origin_world(calib);
  const double eye_distance = std::abs(plane.normal.dot(eye) - plane.offset);
  // Misses scatter just past the rect edge, at the estimator's own angular
  // error scale; a regressor's errors cluster near the target.
  const double margin =
      std::max(std::tan(noise_rad) * eye_distance, kMinMissMarginMm);

  // Ticks t_k = k / rate; the division avoids accumulated drift and keeps a
  // sample exactly on the session end when it divides evenly.
  const auto n_ticks =
      static_cast<std::int64_t>(std::floor(out.end_s * profile.sample_rate_hz +
                                           1e-9));
  out.samples.reserve(static_cast<std::size_t>(n_ticks));
  std::size_t page_idx = 0;
  std::size_t seen_page = std::numeric_limits<std::size_t>::max();
  double lag_until = 0.0;
  double glance_until = 0.0;
  bool glance_to_face = false;
  for (std::int64_t k = 1; k <= n_ticks; ++k) {
    const double tk = static_cast<double>(k) / profile.sample_rate_hz;
    while (page_idx + 1 < out.pages.size() &&
           tk > out.pages[page_idx + 1].start_s) {
      ++page_idx;
    }
    const PageTruth& page = out.pages[page_idx];
    if (page_idx != seen_page) {
      seen_page = page_idx;
      // The page advances while the reader looks up, so a page that follows
      // a gaze shift opens with the gaze still on the face.
      lag_until = page.start_s;
      if (page_idx > 0 && out.pages[page_idx - 1].shift_s &&
          profile.return_lag_s > 0.0) {
        lag_until +=
            rng.log_normal_median(profile.return_lag_s, kGlanceSigma);
      }
    }
    const bool on_face =
        (page.shift_s && tk > *page.shift_s) || tk <= lag_until;

    // Glances run at the opposite region from the phase they started in and
    // keep that target even if the scripted phase flips underneath them.
    if (tk >= glance_until && rng.bernoulli(profile.glance_rate_hz * dt)) {
      glance_until =
          tk + rng.log_normal_median(profile.glance_hold_s, kGlanceSigma);
      glance_to_face = !on_face;
    }
    const bool glancing = tk < glance_until;
    const bool target_face = glancing ? glance_to_face : on_face;
    const AoiRect& rect = target_face ? layout.face : layout.tablet;
    const double tpr = target_face ? profile.face_tpr : profile.tablet_tpr;

    // A hit must classify into its AOI, or the TPR parameters would lie;
    // jitter therefore shapes only where the misclassified samples scatter.
    const bool hit = rng.bernoulli(tpr);
    const Point2D aim = hit ? rect.center()
                            : sample_miss_point(rng, rect, margin,
                                                kMissBandWidthMm);
    EulerGaze gaze = aim_at(calib, aim);
    if (!hit && noise_rad > 0.0) {
      const double yaw = std::clamp(gaze.yaw + rng.normal(0.0, noise_rad),
                                    -kPi, kPi);
      const double pitch = std::clamp(gaze.pitch + rng.normal(0.0, noise_rad),
                                      -kPi / 2.0, kPi / 2.0);
      gaze = EulerGaze(yaw, pitch);
    }
    out.samples.push_back({tk, gaze, k});
  }
  return out;
}

std::string_view to_string(DetectionOutcome outcome) {
  switch (outcome) {
    case DetectionOutcome::correct:
      return "correct";
    case DetectionOutcome::early:
      return "early";
    case DetectionOutcome::late:
      return "late";
    case DetectionOutcome::missed:
      return "missed";
  }
  return "missed";
}

std::vector<PageEvaluation> evaluate_detection(
    std::span<const PageTruth> pages, std::span<const TransitionEvent> events,
    double tolerance_s) {
  if (!std::isfinite(tolerance_s) || tolerance_s < 0.0) {
    throw ConfigError("tolerance_s must be non-negative");
  }
  std::vector<PageEvaluation> out;
  out.reserve(pages.size());
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const PageTruth& page = pages[p];
    const double span_end = p + 1 < pages.size()
                                ? pages[p + 1].start_s
                                : std::numeric_limits<double>::infinity();

    std::optional<double> detected;
    for (const TransitionEvent& e : events) {
      if (e.timestamp >= span_end) break;
      if (e.timestamp < page.start_s) continue;
      if (e.to == EngagementState::disengaged &&
          e.cause == TransitionCause::gaze) {
        detected = e.timestamp;
        break;
      }
    }

    PageEvaluation eval;
    eval.page_index = page.index;
    eval.had_shift = page.shift_s.has_value();
    if (!eval.had_shift) {
      eval.outcome =
          detected ? DetectionOutcome::early : DetectionOutcome::correct;
    } else if (!detected) {
      eval.outcome = DetectionOutcome::missed;
    } else {
      eval.latency_s = *detected - *page.shift_s;
      if (eval.latency_s < 0.0) {
        eval.outcome = DetectionOutcome::early;
      } else if (eval.latency_s <= tolerance_s) {
        eval.outcome = DetectionOutcome::correct;
      } else {
        eval.outcome = DetectionOutcome::late;
      }
    }
    out.push_back(eval);
  }
  return out;
}

double success_rate(std::span<const PageEvaluation> evaluations) {
  int shift_pages = 0;
  int correct = 0;
  for (const PageEvaluation& e : evaluations) {
    if (!e.had_shift) continue;
    ++shift_pages;
    if (e.outcome == DetectionOutcome::correct) ++correct;
  }
  if (shift_pages == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(correct) / shift_pages;
}

void write_truth_json(const std::string& path,
                      const GeneratedSession& session) {
  nlohmann::json pages = nlohmann::json::array();
  for (const PageTruth& page : session.pages) {
    nlohmann::json j{{"index", page.index}, {"start_s", page.start_s}};
    if (page.shift_s) {
      j["shift_s"] = *page.shift_s;
    } else {
      j["shift_s"] = nullptr;
    }
    pages.push_back(std::move(j));
  }
  const nlohmann::json doc{{"type", "truth"},
                           {"version", 1},
                           {"seed", session.seed},
                           {"end_s", session.end_s},
                           {"pages", std::move(pages)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

GeneratedSession read_truth_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid truth JSON: ") + e.what(), path, 0);
  }
  if (doc.value("type", "") != "truth") {
    throw ParseError("expected a truth document", path, 0);
  }
  if (doc.value("version", 0) != 1) {
    throw VersionError("unsupported truth version in '" + path + "'");
  }
  GeneratedSession session;
  session.seed = doc.value("seed", std::uint64_t{0});
  session.end_s = doc.at("end_s").get<double>();
  for (const nlohmann::json& j : doc.at("pages")) {
    PageTruth page;
    page.index = j.at("index").get<int>();
    page.start_s = j.at("start_s").get<double>();
    if (j.contains("shift_s") && !j.at("shift_s").is_null()) {
      page.shift_s = j.at("shift_s").get<double>();
    }
    session.pages.push_back(page);
  }
  return session;
}

}  // namespace gazeflow
