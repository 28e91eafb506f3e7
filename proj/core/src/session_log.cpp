#include "gazeflow/session_log.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "gazeflow/geometry.hpp"

namespace gazeflow {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

[[noreturn]] void fail(const std::string& what, const std::string& source,
                       int line_no) {
  throw ParseError(what, source, line_no);
}

nlohmann::json parse_json_line(std::string_view line, const std::string& source,
                               int line_no) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what(), source, line_no);
  }
}

double require_number(const nlohmann::json& j, const char* field,
                      const std::string& source, int line_no) {
  if (!j.contains(field) || !j.at(field).is_number()) {
    fail(std::string("missing or non-numeric field '") + field + "'", source,
         line_no);
  }
  const double v = j.at(field).get<double>();
  if (!std::isfinite(v)) {
    fail(std::string("field '") + field + "' must be finite", source, line_no);
  }
  return v;
}

std::string require_string(const nlohmann::json& j, const char* field,
                           const std::string& source, int line_no) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    fail(std::string("missing or non-string field '") + field + "'", source,
         line_no);
  }
  return j.at(field).get<std::string>();
}

std::string record_type(const nlohmann::json& j, const std::string& source,
                        int line_no) {
  if (!j.is_object()) fail("record must be a JSON object", source, line_no);
  return require_string(j, "type", source, line_no);
}

void check_header(const nlohmann::json& j, std::string_view kind,
                  const std::string& source, int line_no) {
  if (record_type(j, source, line_no) != "header") {
    fail("first record must be a header", source, line_no);
  }
  if (!j.contains("version") || !j.at("version").is_number_integer()) {
    fail("header is missing an integer 'version'", source, line_no);
  }
  const int version = j.at("version").get<int>();
  if (version != kLogFormatVersion) {
    throw VersionError(source + ":" + std::to_string(line_no) +
                       ": unsupported log version " + std::to_string(version));
  }
  if (require_string(j, "kind", source, line_no) != kind) {
    fail("expected a log of kind '" + std::string(kind) + "'", source, line_no);
  }
}

}  // namespace

std::string format_header_record(std::string_view kind) {
  std::string out = "{\"type\":\"header\",\"version\":";
  out += std::to_string(kLogFormatVersion);
  out += ",\"kind\":\"";
  out += kind;
  out += "\"}";
  return out;
}

std::string format_sample_record(const LoggedSample& s) {
  std::string out = "{\"type\":\"sample\",\"t\":";
  out += fixed6(s.sample.timestamp);
  out += ",\"yaw_deg\":";
  out += fixed6(rad_to_deg(s.sample.gaze.yaw));
  out += ",\"pitch_deg\":";
  out += fixed6(rad_to_deg(s.sample.gaze.pitch));
  if (s.sample.frame_id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%" PRId64,
                  static_cast<std::int64_t>(*s.sample.frame_id));
    out += ",\"frame_id\":";
    out += buf;
  }
  if (s.label) {
    out += ",\"label\":\"";
    out += to_string(*s.label);
    out += "\"";
  }
  out += "}";
  return out;
}

std::string format_event_record(const TransitionEvent& e) {
  std::string out = "{\"type\":\"event\",\"t\":";
  out += fixed6(e.timestamp);
  out += ",\"from\":\"";
  out += to_string(e.from);
  out += "\",\"to\":\"";
  out += to_string(e.to);
  out += "\",\"cause\":\"";
  out += to_string(e.cause);
  out += "\"";
  if (e.cause == TransitionCause::gaze && e.window_fraction) {
    out += ",\"window_fraction\":";
    out += fixed6(*e.window_fraction);
  }
  out += ",\"window_samples\":";
  out += std::to_string(e.window_samples);
  out += "}";
  return out;
}

std::string format_error_record(const std::string& message) {
  return "{\"type\":\"error\",\"message\":" + nlohmann::json(message).dump() +
         "}";
}

std::string format_heartbeat_record(EngagementState state,
                                    std::optional<double> last_t) {
  std::string out = "{\"type\":\"heartbeat\",\"state\":\"";
  out += to_string(state);
  out += "\"";
  if (last_t) {
    out += ",\"last_t\":";
    out += fixed6(*last_t);
  }
  out += "}";
  return out;
}

LoggedSample parse_sample_line(std::string_view line, const std::string& source,
                               int line_no) {
  const nlohmann::json j = parse_json_line(line, source, line_no);
  if (record_type(j, source, line_no) != "sample") {
    fail("expected a sample record", source, line_no);
  }
  const double t = require_number(j, "t", source, line_no);
  const double yaw = require_number(j, "yaw_deg", source, line_no);
  const double pitch = require_number(j, "pitch_deg", source, line_no);

  LoggedSample out;
  try {
    out.sample.gaze = EulerGaze(deg_to_rad(yaw), deg_to_rad(pitch));
  } catch (const Error& e) {
    fail(e.what(), source, line_no);
  }
  out.sample.timestamp = t;
  if (j.contains("frame_id")) {
    if (!j.at("frame_id").is_number_integer()) {
      fail("field 'frame_id' must be an integer", source, line_no);
    }
    out.sample.frame_id = j.at("frame_id").get<std::int64_t>();
  }
  if (j.contains("label")) {
    try {
      out.label = aoi_label_from_string(
          require_string(j, "label", source, line_no));
    } catch (const ParseError& e) {
      fail(e.what(), source, line_no);
    }
  }
  return out;
}

TransitionEvent parse_event_line(std::string_view line,
                                 const std::string& source, int line_no) {
  const nlohmann::json j = parse_json_line(line, source, line_no);
  if (record_type(j, source, line_no) != "event") {
    fail("expected an event record", source, line_no);
  }
  TransitionEvent out;
  out.timestamp = require_number(j, "t", source, line_no);
  try {
    out.from =
        engagement_state_from_string(require_string(j, "from", source, line_no));
    out.to =
        engagement_state_from_string(require_string(j, "to", source, line_no));
    out.cause =
        transition_cause_from_string(require_string(j, "cause", source, line_no));
  } catch (const ParseError& e) {
    fail(e.what(), source, line_no);
  }
  if (j.contains("window_fraction")) {
    out.window_fraction = require_number(j, "window_fraction", source, line_no);
  }
  if (!j.contains("window_samples") ||
      !j.at("window_samples").is_number_integer()) {
    fail("missing or non-integer field 'window_samples'", source, line_no);
  }
  out.window_samples = j.at("window_samples").get<int>();
  return out;
}

namespace {

// Applies `on_record` to every non-header line. Skips blank lines, keeps
// 1-based line numbers accurate.
template <typename OnRecord>
void read_log_lines(const std::string& path, std::string_view kind,
                    OnRecord on_record) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::string line;
  int line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!seen_header) {
      check_header(parse_json_line(line, path, line_no), kind, path, line_no);
      seen_header = true;
      continue;
    }
    on_record(line, line_no);
  }
  if (!seen_header) {
    throw ParseError("log has no header record", path, 0);
  }
}

}  // namespace

SampleLog read_sample_log(const std::string& path) {
  SampleLog log;
  std::optional<double> last_t;
  read_log_lines(path, "samples", [&](const std::string& line, int line_no) {
    LoggedSample s = parse_sample_line(line, path, line_no);
    if (last_t && s.sample.timestamp <= *last_t) {
      fail("sample timestamps must be strictly increasing", path, line_no);
    }
    last_t = s.sample.timestamp;
    log.samples.push_back(std::move(s));
  });
  return log;
}

EventLog read_event_log(const std::string& path) {
  EventLog log;
  std::optional<double> last_t;
  read_log_lines(path, "events", [&](const std::string& line, int line_no) {
    TransitionEvent e = parse_event_line(line, path, line_no);
    if (last_t && e.timestamp < *last_t) {
      fail("event timestamps must not decrease", path, line_no);
    }
    last_t = e.timestamp;
    log.events.push_back(e);
  });
  return log;
}

void write_sample_log(std::ostream& out,
                      std::span<const LoggedSample> samples) {
  out << format_header_record("samples") << '\n';
  for (const LoggedSample& s : samples) {
    out << format_sample_record(s) << '\n';
  }
}

void write_sample_log(const std::string& path,
                      std::span<const LoggedSample> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  write_sample_log(out, samples);
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

void write_event_log(std::ostream& out,
                     std::span<const TransitionEvent> events) {
  out << format_header_record("events") << '\n';
  for (const TransitionEvent& e : events) {
    out << format_event_record(e) << '\n';
  }
}

void write_event_log(const std::string& path,
                     std::span<const TransitionEvent> events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  write_event_log(out, events);
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

}  // namespace gazeflow
