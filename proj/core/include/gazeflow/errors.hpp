#pragma once

#include <stdexcept>
#include <string>

namespace gazeflow {

// Base class for all engine errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gaze angle not finite or outside its valid range.
struct InvalidAngleError : Error {
  using Error::Error;
};

// Invalid configuration value, geometry, or layout.
struct ConfigError : Error {
  using Error::Error;
};

// Malformed input record. `line` is 1-based; 0 when unknown.
struct ParseError : Error {
  ParseError(const std::string& what, std::string source_name, int line_no)
      : Error(compose(what, source_name, line_no)),
        source(std::move(source_name)),
        line(line_no) {}

  std::string source;
  int line = 0;

 private:
  static std::string compose(const std::string& what, const std::string& source,
                             int line) {
    if (source.empty() && line <= 0) {
      return what;
    }
    std::string msg = source;
    if (line > 0) {
      msg += ":" + std::to_string(line);
    }
    msg += ": " + what;
    return msg;
  }
};

// Log or message format version this build does not understand.
struct VersionError : Error {
  using Error::Error;
};

// Sample fed out of timestamp order.
struct OrderingError : Error {
  using Error::Error;
};

// Operation not legal in the current detector state.
struct StateError : Error {
  using Error::Error;
};

// Filesystem or socket failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace gazeflow
