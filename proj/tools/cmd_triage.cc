#include <csignal>
#include <memory>
#include <optional>

#include "commands.h"
#include "common.h"
#include "stance/triage_server.h"

namespace stance::cli {
namespace {

struct ServeArgs {
  Common common;
  std::string queue;
  std::string log_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
};

TriageServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

void run_serve(const ServeArgs& a) {
  RecoveryReport report;
  TriageService service(load_queue(a.queue), a.log_path, TriageService::system_clock_ms, &report);
  if (!report.warning.empty()) log(a.log_path + ": " + report.warning);
  log("replayed " + std::to_string(report.replayed) + " decision(s); " + std::to_string(service.pending(std::nullopt)) +
      " item(s) pending");
  TriageServer server(service, a.static_dir.empty() ? std::nullopt : std::optional<std::string>(a.static_dir));
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  int port = a.port;
  bool ok;
  if (port == 0) {
    port = server.bind_any_port(a.host);
    ok = port > 0;
    if (ok) {
      log("listening on http://" + a.host + ":" + std::to_string(port));
      ok = server.listen_after_bind();
    }
  } else {
    log("listening on http://" + a.host + ":" + std::to_string(port));
    ok = server.listen(a.host, port);
  }
  g_server = nullptr;
  if (!ok) throw Error("cannot listen on " + a.host + ":" + std::to_string(port));
}

}  // namespace

void register_triage_commands(CLI::App& app) {
  auto* triage = app.add_subcommand("triage", "Human review of candidate predictions");
  triage->require_subcommand(1);
  auto args = std::make_shared<ServeArgs>();
  auto* sub = triage->add_subcommand("serve", "Serve the review queue over HTTP");
  add_common(sub, args->common);
  sub->add_option("--queue", args->queue, "Queue JSON lines")->required();
  sub->add_option("--log", args->log_path, "Append-only decision log")->required();
  sub->add_option("--port", args->port, "TCP port (0 picks a free one)")->capture_default_str();
  sub->add_option("--host", args->host, "Bind address")->capture_default_str();
  sub->add_option("--static", args->static_dir, "Directory of UI assets served at /");
  sub->callback([args] { run_serve(*args); });
}

}  // namespace stance::cli
