#pragma once

#include <memory>
#include <optional>
#include <string>

#include "stance/triage.h"

namespace stance {

// HTTP front end for a TriageService:
//   GET  /api/queue?class=<c>&limit=<n>
//   POST /api/decisions   {"item_id", "verdict", "annotator_id"}
//   GET  /api/stats
// Errors come back as {"error": "..."} with status 400 (bad request) or 404
// (unknown item).
class TriageServer {
 public:
  explicit TriageServer(TriageService& service, std::optional<std::string> static_dir = std::nullopt);
  ~TriageServer();

  // Binds and serves until stop(). Returns false if binding fails.
  bool listen(const std::string& host, int port);
  // Binds to a free port and returns it (or -1); serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

constexpr std::size_t kDefaultQueueLimit = 20;
constexpr std::size_t kMaxQueueLimit = 1000;

}  // namespace stance
