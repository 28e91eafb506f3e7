#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazeflow/aoi.hpp"
#include "gazeflow/detector.hpp"
#include "gazeflow/smoothing.hpp"

namespace gazeflow {

// Newline-delimited JSON session logs. Every file starts with a header
// record, angles travel in degrees, and all doubles are written with six
// fixed decimals so identical data always produces identical bytes.
inline constexpr int kLogFormatVersion = 1;

struct LoggedSample {
  GazeSample sample;
  // Optional AOI annotation carried through from upstream tools; replay
  // recomputes labels from geometry and ignores it.
  std::optional<AoiLabel> label;
};

struct SampleLog {
  std::vector<LoggedSample> samples;
};

struct EventLog {
  std::vector<TransitionEvent> events;
};

// Canonical one-line records, no trailing newline.
std::string format_header_record(std::string_view kind);
std::string format_sample_record(const LoggedSample& sample);
std::string format_event_record(const TransitionEvent& event);
std::string format_error_record(const std::string& message);
std::string format_heartbeat_record(EngagementState state,
                                    std::optional<double> last_t);

// `source` and `line_no` only feed the ParseError diagnostics.
LoggedSample parse_sample_line(std::string_view line,
                               const std::string& source, int line_no);
TransitionEvent parse_event_line(std::string_view line,
                                 const std::string& source, int line_no);

// Readers insist on the header, the expected kind, a supported version, and
// timestamp ordering (samples strictly increasing, events non-decreasing).
// Violations raise ParseError/VersionError naming the file and line.
SampleLog read_sample_log(const std::string& path);
EventLog read_event_log(const std::string& path);

void write_sample_log(std::ostream& out, std::span<const LoggedSample> samples);
void write_sample_log(const std::string& path,
                      std::span<const LoggedSample> samples);
void write_event_log(std::ostream& out, std::span<const TransitionEvent> events);
void write_event_log(const std::string& path,
                     std::span<const TransitionEvent> events);

}  // namespace gazeflow
