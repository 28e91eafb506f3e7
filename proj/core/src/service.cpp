#include "gazeflow/service.hpp"

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <string>

#include "json.hpp"

#include "gazeflow/pipeline.hpp"
#include "gazeflow/session_log.hpp"

namespace gazeflow {
namespace {

constexpr char kStreamSource[] = "stream";

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

bool send_line(int fd, std::string line) {
  line.push_back('\n');
  return send_all(fd, line);
}

}  // namespace

StreamServer::StreamServer(const AppConfig& config) : config_(config) {
  config_.detector.validate();
  config_.service.validate();
}

StreamServer::~StreamServer() { stop(); }

void StreamServer::start() {
  if (running_.load()) {
    throw StateError("server is already running");
  }

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* info = nullptr;
  const std::string port_str = std::to_string(config_.service.port);
  const int rc =
      ::getaddrinfo(config_.service.host.c_str(), port_str.c_str(), &hints,
                    &info);
  if (rc != 0) {
    throw IoError("cannot resolve '" + config_.service.host +
                  "': " + ::gai_strerror(rc));
  }

  int fd = -1;
  std::string last_error = "no usable address";
  for (addrinfo* a = info; a != nullptr; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
    if (fd < 0) {
      last_error = std::strerror(errno);
      continue;
    }
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    last_error = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(info);
  if (fd < 0) {
    throw IoError("cannot bind " + config_.service.host + ":" + port_str +
                  ": " + last_error);
  }
  if (::listen(fd, 16) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw IoError("listen failed: " + err);
  }

  sockaddr_storage bound{};
  socklen_t bound_len = sizeof(bound);
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &bound_len) !=
      0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw IoError("getsockname failed: " + err);
  }
  if (bound.ss_family == AF_INET) {
    port_ = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  } else if (bound.ss_family == AF_INET6) {
    port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
  } else {
    port_ = config_.service.port;
  }

  listen_fd_ = fd;
  running_.store(true);
  accept_thread_ = std::thread(&StreamServer::accept_loop, this);
}

void StreamServer::stop() {
  if (!running_.exchange(false)) {
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (accept_thread_.joinable()) accept_thread_.join();

  std::vector<std::unique_ptr<Connection>> doomed;
  {
    const std::lock_guard<std::mutex> lock(mutex_);
    doomed.swap(connections_);
  }
  for (auto& conn : doomed) {
    // The worker owns the close; shutdown just unblocks its poll/recv.
    ::shutdown(conn->fd, SHUT_RDWR);
  }
  for (auto& conn : doomed) {
    if (conn->thread.joinable()) conn->thread.join();
  }
}

void StreamServer::reap_finished_locked() {
  auto it = connections_.begin();
  while (it != connections_.end()) {
    if ((*it)->done.load()) {
      if ((*it)->thread.joinable()) (*it)->thread.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void StreamServer::accept_loop() {
  while (running_.load()) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      // Listener closed by stop(), or a transient accept failure.
      if (!running_.load()) break;
      continue;
    }
    if (!running_.load()) {
      ::close(fd);
      break;
    }
    const std::lock_guard<std::mutex> lock(mutex_);
    reap_finished_locked();
    auto conn = std::make_unique<Connection>();
    conn->fd = fd;
    Connection* raw = conn.get();
    connections_.push_back(std::move(conn));
    raw->thread = std::thread(&StreamServer::serve_connection, this, raw);
  }
}

void StreamServer::serve_connection(Connection* conn) {
  using Clock = std::chrono::steady_clock;
  const int fd = conn->fd;
  const ServiceConfig& svc = config_.service;

  SessionPipeline pipeline(config_.detector, config_.layout,
                           config_.calibration);
  std::string buffer;
  std::optional<double> last_t;
  bool seen_header = false;
  int line_no = 0;
  bool open = send_line(fd, format_header_record("events"));

  const bool heartbeats = svc.heartbeat_s > 0.0;
  const auto hb_interval = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(heartbeats ? svc.heartbeat_s : 1.0));
  auto next_hb = Clock::now() + hb_interval;

  const auto fatal = [&](const std::string& message) {
    send_line(fd, format_error_record(message));
    open = false;
  };

  const auto handle_line = [&](const std::string& line) {
    ++line_no;
    if (line.empty()) return;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      open = send_line(fd, format_error_record(
                              std::string(kStreamSource) + ":" +
                              std::to_string(line_no) +
                              ": invalid JSON: " + e.what()));
      return;
    }
    const std::string type =
        j.is_object() && j.contains("type") && j.at("type").is_string()
            ? j.at("type").get<std::string>()
            : "";

    if (!seen_header) {
      if (type != "header") {
        fatal(std::string(kStreamSource) + ":" + std::to_string(line_no) +
              ": first record must be a samples header");
        return;
      }
      if (j.value("version", 0) != kLogFormatVersion) {
        fatal(std::string(kStreamSource) + ":" + std::to_string(line_no) +
              ": unsupported stream version");
        return;
      }
      if (j.value("kind", "") != "samples") {
        fatal(std::string(kStreamSource) + ":" + std::to_string(line_no) +
              ": expected a stream of kind 'samples'");
        return;
      }
      seen_header = true;
      return;
    }

    if (type != "sample") {
      open = send_line(fd, format_error_record(
                              std::string(kStreamSource) + ":" +
                              std::to_string(line_no) +
                              ": unsupported record type '" + type + "'"));
      return;
    }

    try {
      const LoggedSample sample =
          parse_sample_line(line, kStreamSource, line_no);
      const PipelineStep step = pipeline.feed(sample.sample);
      last_t = sample.sample.timestamp;
      for (int i = 0; open && i < step.event_count; ++i) {
        open = send_line(fd, format_event_record(step.events[i]));
      }
    } catch (const Error& e) {
      // Bad record or out-of-order sample: report it, keep the session.
      open = send_line(fd, format_error_record(e.what()));
    }
  };

  while (open && running_.load()) {
    int timeout_ms = -1;
    if (heartbeats) {
      const auto now = Clock::now();
      while (next_hb <= now) {
        if (!send_line(fd, format_heartbeat_record(pipeline.state(), last_t))) {
          open = false;
          break;
        }
        next_hb += hb_interval;
      }
      if (!open) break;
      timeout_ms = static_cast<int>(
          std::chrono::duration_cast<std::chrono::milliseconds>(next_hb -
                                                                Clock::now())
              .count() +
          1);
      if (timeout_ms < 0) timeout_ms = 0;
    }

    pollfd pfd{fd, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, timeout_ms);
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (pr == 0) continue;  // timeout: heartbeat due next iteration

    char chunk[4096];
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    if (buffer.size() > svc.max_buffer_bytes) {
      fatal("receive buffer overflow; slow down or shorten records");
      break;
    }

    std::size_t pos;
    while (open && (pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      handle_line(line);
    }
    if (open && buffer.size() > svc.max_line_bytes) {
      fatal("record exceeds the line size limit");
      break;
    }
  }

  ::shutdown(fd, SHUT_RDWR);
  ::close(fd);
  conn->done.store(true);
}

}  // namespace gazeflow
