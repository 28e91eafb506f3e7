#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazeflow/aoi.hpp"
#include "gazeflow/detector.hpp"
#include "gazeflow/geometry.hpp"
#include "gazeflow/smoothing.hpp"

namespace gazeflow {

// Deterministic variates over raw mt19937_64 output. The standard
// distribution templates are implementation-defined, and golden logs must
// match byte for byte across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller without the cached second variate, so draw order stays
  // obvious from the call sites.
  double normal(double mean, double stddev);

  // Lognormal parameterized by its median: exp(Normal(ln median, sigma)).
  double log_normal_median(double median, double sigma);

 private:
  std::mt19937_64 gen_;
};

// Scripted subject behavior for one synthetic session. Pages are open loop:
// their timing never reacts to the detector under test, so the same seed
// yields the same samples for every detector configuration.
struct BehaviorProfile {
  double sample_rate_hz = 5.0;
  double read_time_median_s = 3.8;  // lognormal median of per-page reading
  double read_time_sigma = 0.12;    // lognormal shape; 0 pins the median
  double face_hold_s = 4.0;         // dwell on the face after looking up
  double page_timeout_s = 10.0;     // tablet dwell on pages with no shift
  double shift_probability = 1.0;   // chance a page ends with a gaze shift
  double tablet_tpr = 0.4;  // per-sample chance a tablet fixation lands on it
  double face_tpr = 0.5;    // same for face fixations
  double noise_deg = 2.0;   // angular scatter applied to missed samples
  // Transient fixations at the opposite region: a reader checks the face
  // mid-page, or re-checks the tablet while holding on the face. These runs
  // of consecutive off-target samples survive smoothing, so they are what a
  // short decision window pays for.
  double glance_rate_hz = 0.11;  // glance onsets per second while fixating
  double glance_hold_s = 0.9;    // median glance duration (lognormal)
  // After a page that ended with a gaze shift, the next page starts with
  // the gaze still on the face for this long (median, lognormal): the page
  // advances precisely while the reader is looking up, so the first beats
  // of a fresh page are face fixations, not tablet ones. 0 disables.
  double return_lag_s = 0.6;

  void validate() const;
};

struct PageTruth {
  int index = 0;
  double start_s = 0.0;
  std::optional<double> shift_s;  // absent on pages without a gaze shift
};

struct GeneratedSession {
  std::uint64_t seed = 0;
  std::vector<GazeSample> samples;
  std::vector<PageTruth> pages;
  double end_s = 0.0;
};

// Synthesizes one session: per page, tablet fixations for a lognormal
// reading time, then face fixations for face_hold_s (shift pages), or
// tablet fixations for page_timeout_s (no-shift pages). Each sample either
// hits its target AOI center (probability = that AOI's true positive rate)
// or misses into a band around it and picks up angular jitter. Hits stay
// hits so the TPR parameters keep their measured meaning; jittered misses
// can land inside a neighboring AOI, which is how classifier confusion
// between the two regions arises.
GeneratedSession generate_session(const BehaviorProfile& profile,
                                  const SceneCalibration& calib,
                                  const AoiLayout& layout, int n_pages,
                                  std::uint64_t seed);

enum class DetectionOutcome { correct, early, late, missed };

std::string_view to_string(DetectionOutcome outcome);

struct PageEvaluation {
  int page_index = 0;
  DetectionOutcome outcome = DetectionOutcome::missed;
  bool had_shift = false;
  // Detection time minus scripted shift time; NaN when either is absent.
  double latency_s = std::numeric_limits<double>::quiet_NaN();
};

// Scores transitions against scripted truth. Each page owns the time span
// up to the next page's start; the first gaze-caused disengagement in that
// span decides the outcome (timeout disengagements are the failsafe, not
// detections, and never count). Pages without a shift score correct exactly
// when no gaze disengagement lands in their span.
std::vector<PageEvaluation> evaluate_detection(
    std::span<const PageTruth> pages, std::span<const TransitionEvent> events,
    double tolerance_s);

// Fraction of shift pages scored correct; NaN when no page has a shift.
double success_rate(std::span<const PageEvaluation> evaluations);

// Truth files record the script, not the samples; read_truth_json returns a
// session with an empty sample vector.
void write_truth_json(const std::string& path, const GeneratedSession& session);
GeneratedSession read_truth_json(const std::string& path);

}  // namespace gazeflow
