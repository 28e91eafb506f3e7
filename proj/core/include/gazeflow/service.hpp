#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "gazeflow/config.hpp"

namespace gazeflow {

// Line-delimited TCP front end for the live pipeline.
//
// Each connection runs its own session: the client sends a samples header
// followed by sample records, the server answers with an events header and
// a record per transition, plus optional heartbeats while the line is
// quiet. Malformed records, unknown record types, and out-of-order samples
// produce an error record and the stream continues; a missing or
// incompatible header and receive-buffer overflow produce an error record
// and close the connection. Replay over a file and a replay through this
// server emit identical event records.
class StreamServer {
 public:
  explicit StreamServer(const AppConfig& config);
  ~StreamServer();

  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  // Binds, listens, and spawns the accept loop. Port 0 picks an ephemeral
  // port; port() reports the bound one. Throws IoError on socket failures.
  void start();
  void stop();

  bool running() const { return running_.load(); }
  int port() const { return port_; }

 private:
  struct Connection {
    int fd = -1;
    std::atomic<bool> done{false};
    std::thread thread;
  };

  void accept_loop();
  void serve_connection(Connection* conn);
  void reap_finished_locked();

  AppConfig config_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex mutex_;
  std::vector<std::unique_ptr<Connection>> connections_;
};

}  // namespace gazeflow
