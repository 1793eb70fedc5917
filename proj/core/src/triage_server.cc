#include "stance/triage_server.h"

#include <charconv>

#include "httplib.h"
#include "json.hpp"

namespace stance {
namespace {

using json = nlohmann::ordered_json;

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), "application/json");
}

}  // namespace

struct TriageServer::Impl {
  TriageService& service;
  httplib::Server server;

  explicit Impl(TriageService& s) : service(s) {}
};

TriageServer::TriageServer(TriageService& service, std::optional<std::string> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& server = impl_->server;
  TriageService& svc = service;

  server.Get("/api/queue", [&svc](const httplib::Request& req, httplib::Response& res) {
    std::optional<Stance> cls;
    if (req.has_param("class")) {
      std::string name = req.get_param_value("class");
      cls = parse_stance(name);
      if (!cls || *cls == Stance::kNeutral) return send_error(res, 400, "unknown class: " + name);
    }
    std::size_t limit = kDefaultQueueLimit;
    if (req.has_param("limit")) {
      std::string text = req.get_param_value("limit");
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), limit);
      if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        return send_error(res, 400, "bad limit: " + text);
      }
      limit = std::min(limit, kMaxQueueLimit);
    }
    json items = json::array();
    for (const auto& item : svc.get_next(cls, limit)) items.push_back(json::parse(item_json(item)));
    json body;
    body["items"] = std::move(items);
    body["remaining"] = svc.pending(cls);
    res.set_content(body.dump(), "application/json");
  });

  server.Post("/api/decisions", [&svc](const httplib::Request& req, httplib::Response& res) {
    std::int64_t item_id = 0;
    std::optional<Verdict> verdict;
    std::string annotator;
    try {
      json j = json::parse(req.body);
      item_id = j.at("item_id").get<std::int64_t>();
      std::string v = j.at("verdict").get<std::string>();
      verdict = parse_verdict(v);
      if (!verdict) return send_error(res, 400, "unknown verdict: " + v);
      annotator = j.at("annotator_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      return send_error(res, 400, std::string("malformed decision: ") + e.what());
    }
    if (annotator.empty()) return send_error(res, 400, "annotator_id must not be empty");
    TriageService::Ack ack;
    try {
      ack = svc.post_decision(item_id, *verdict, annotator);
    } catch (const InvalidArgument& e) {
      return send_error(res, 404, e.what());
    } catch (const Error& e) {
      return send_error(res, 500, e.what());
    }
    json body;
    body["decision"] = json::parse(decision_to_json(ack.decision));
    body["stats"] = json::parse(stats_json(ack.stats));
    res.set_content(body.dump(), "application/json");
  });

  server.Get("/api/stats", [&svc](const httplib::Request&, httplib::Response& res) {
    res.set_content(stats_json(svc.stats()), "application/json");
  });

  if (static_dir && !server.set_mount_point("/", *static_dir)) {
    throw InvalidArgument("static directory not found: " + *static_dir);
  }
}

TriageServer::~TriageServer() { stop(); }

bool TriageServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int TriageServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool TriageServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void TriageServer::stop() {
  if (impl_) impl_->server.stop();
}

bool TriageServer::is_running() const { return impl_->server.is_running(); }

}  // namespace stance
