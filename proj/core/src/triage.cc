#include "stance/triage.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"

namespace stance {
namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 3> kStateNames = {"pending", "decided", "skipped"};
constexpr std::array<std::string_view, 4> kVerdictNames = {"pro_russian", "pro_ukrainian", "neutral", "skip"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string_view to_string(ItemState s) { return kStateNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(Verdict v) { return kVerdictNames[static_cast<std::size_t>(v)]; }

std::optional<Verdict> parse_verdict(std::string_view name) {
  for (std::size_t i = 0; i < kVerdictNames.size(); ++i) {
    if (kVerdictNames[i] == name) return static_cast<Verdict>(i);
  }
  return std::nullopt;
}

std::optional<Stance> stance_of(Verdict v) {
  if (v == Verdict::kSkip) return std::nullopt;
  return stance_at(static_cast<int>(v));
}

std::vector<TriageItem> build_queue(std::span<const CandidateEdge> candidates, const Corpus* corpus) {
  std::map<std::string, TriageItem> best;
  for (const auto& c : candidates) {
    for (const auto& t : c.support) {
      TriageItem item;
      item.tweet_id = t.tweet_id;
      item.predicted = c.stance;
      item.confidence = t.confidence;
      item.edge = c.edge;
      auto it = best.find(t.tweet_id);
      if (it == best.end()) {
        best.emplace(t.tweet_id, std::move(item));
      } else if (item.confidence > it->second.confidence ||
                 (item.confidence == it->second.confidence && index_of(item.predicted) < index_of(it->second.predicted))) {
        it->second = std::move(item);
      }
    }
  }
  std::vector<TriageItem> out;
  out.reserve(best.size());
  for (auto& [id, item] : best) {
    if (corpus && corpus->contains(id)) item.raw_text = corpus->tweet(id).raw_text;
    out.push_back(std::move(item));
  }
  std::stable_sort(out.begin(), out.end(), [](const TriageItem& a, const TriageItem& b) {
    return a.confidence != b.confidence ? a.confidence > b.confidence : a.tweet_id < b.tweet_id;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].item_id = static_cast<std::int64_t>(i + 1);
  return out;
}

std::string item_json(const TriageItem& item) {
  json j;
  j["item_id"] = item.item_id;
  j["tweet_id"] = item.tweet_id;
  j["text"] = item.raw_text;
  j["predicted_class"] = std::string(to_string(item.predicted));
  j["confidence"] = item.confidence;
  j["user_a"] = item.edge.a;
  j["user_b"] = item.edge.b;
  j["state"] = std::string(to_string(item.state));
  return j.dump();
}

std::string format_queue(std::span<const TriageItem> items) {
  std::string out;
  for (const auto& item : items) {
    json j;
    j["item_id"] = item.item_id;
    j["tweet_id"] = item.tweet_id;
    j["text"] = item.raw_text;
    j["predicted_class"] = std::string(to_string(item.predicted));
    j["confidence"] = item.confidence;
    j["user_a"] = item.edge.a;
    j["user_b"] = item.edge.b;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TriageItem> parse_queue(std::string_view content) {
  std::vector<TriageItem> out;
  std::set<std::int64_t> ids;
  std::size_t start = 0, line_no = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      json j = json::parse(line);
      TriageItem item;
      item.item_id = j.at("item_id").get<std::int64_t>();
      item.tweet_id = j.at("tweet_id").get<std::string>();
      item.raw_text = j.value("text", std::string());
      item.predicted = stance_from_string(j.at("predicted_class").get<std::string>());
      item.confidence = j.at("confidence").get<double>();
      item.edge = EdgeKey::of(j.at("user_a").get<std::string>(), j.at("user_b").get<std::string>());
      if (!(item.confidence >= 0.0 && item.confidence <= 1.0)) throw ParseError("confidence outside [0,1]");
      if (!ids.insert(item.item_id).second) throw ParseError("duplicate item_id " + std::to_string(item.item_id));
      out.push_back(std::move(item));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("queue line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("queue line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TriageItem> load_queue(const std::string& path) { return parse_queue(read_file(path)); }

std::string decision_to_json(const AnnotationDecision& d) {
  json j;
  j["item_id"] = d.item_id;
  j["verdict"] = std::string(to_string(d.verdict));
  j["annotator_id"] = d.annotator_id;
  j["decided_at"] = d.decided_at;
  return j.dump();
}

AnnotationDecision decision_from_json(std::string_view line) {
  try {
    json j = json::parse(line);
    AnnotationDecision d;
    d.item_id = j.at("item_id").get<std::int64_t>();
    auto v = parse_verdict(j.at("verdict").get<std::string>());
    if (!v) throw ParseError("unknown verdict");
    d.verdict = *v;
    d.annotator_id = j.at("annotator_id").get<std::string>();
    d.decided_at = j.at("decided_at").get<std::int64_t>();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("decision: ") + e.what());
  }
}

std::vector<ReviewedTweet> reviewed_tweets(std::span<const TriageItem> queue,
                                           std::span<const AnnotationDecision> decisions) {
  std::map<std::int64_t, const TriageItem*> by_id;
  for (const auto& item : queue) by_id[item.item_id] = &item;
  std::map<std::int64_t, Verdict> latest;
  for (const auto& d : decisions) latest[d.item_id] = d.verdict;
  std::vector<ReviewedTweet> out;
  for (const auto& [id, verdict] : latest) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw InvalidArgument("decision for unknown item " + std::to_string(id));
    out.push_back({it->second->tweet_id, it->second->predicted, stance_of(verdict)});
  }
  return out;
}

std::string stats_json(const TriageStats& stats) {
  json j;
  for (Stance s : {Stance::kProRussian, Stance::kProUkrainian}) {
    const ClassTriageStats& c = stats.of(s);
    json cj;
    cj["pending"] = c.pending;
    cj["reviewed"] = c.reviewed;
    cj["decided"] = c.decided;
    cj["skipped"] = c.skipped;
    cj["confirmed"] = c.confirmed;
    cj["new_edges"] = c.new_edges;
    cj["hit_rate"] = opt_json(c.hit_rate);
    j[std::string(to_string(s))] = std::move(cj);
  }
  return j.dump();
}

ReplayResult read_decision_log(const std::string& path) {
  ReplayResult r;
  std::ifstream probe(path, std::ios::binary);
  if (!probe) return r;
  probe.close();
  std::string content = read_file(path);
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) {
      r.warning = "dropped unterminated trailing log line (" + std::to_string(content.size() - start) + " bytes)";
      break;
    }
    std::string_view line(content.data() + start, end - start);
    try {
      r.decisions.push_back(decision_from_json(line));
    } catch (const ParseError& e) {
      if (end + 1 < content.size()) {
        throw ParseError(path + ": corrupt decision at byte " + std::to_string(start) + ": " + e.what());
      }
      r.warning = "dropped corrupt trailing log line: " + std::string(e.what());
      break;
    }
    start = end + 1;
    r.valid_bytes = start;
  }
  return r;
}

std::int64_t TriageService::system_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

TriageService::TriageService(std::vector<TriageItem> queue, std::string log_path, Clock clock,
                             RecoveryReport* report)
    : items_(std::move(queue)), log_path_(std::move(log_path)), clock_(std::move(clock)) {
  std::stable_sort(items_.begin(), items_.end(), [](const TriageItem& a, const TriageItem& b) {
    return a.confidence != b.confidence ? a.confidence > b.confidence : a.item_id < b.item_id;
  });
  for (std::size_t i = 0; i < items_.size(); ++i) {
    items_[i].state = ItemState::kPending;
    if (!index_.emplace(items_[i].item_id, i).second) {
      throw InvalidArgument("duplicate item_id " + std::to_string(items_[i].item_id));
    }
    ++stats_.of(items_[i].predicted).pending;
    evidence_[items_[i].edge];
  }

  ReplayResult replay = read_decision_log(log_path_);
  for (const auto& d : replay.decisions) {
    if (!index_.count(d.item_id)) {
      throw ParseError(log_path_ + ": decision for unknown item " + std::to_string(d.item_id));
    }
    apply(d);
  }

  fd_ = ::open(log_path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error("cannot open decision log " + log_path_ + ": " + std::strerror(errno));
  struct stat st {};
  if (::fstat(fd_, &st) == 0 && static_cast<std::size_t>(st.st_size) > replay.valid_bytes) {
    if (::ftruncate(fd_, static_cast<off_t>(replay.valid_bytes)) != 0 || ::fsync(fd_) != 0) {
      ::close(fd_);
      throw Error("cannot truncate decision log " + log_path_);
    }
  }
  if (report) {
    report->replayed = replay.decisions.size();
    report->truncated_bytes =
        static_cast<std::size_t>(st.st_size) > replay.valid_bytes ? static_cast<std::size_t>(st.st_size) - replay.valid_bytes : 0;
    report->warning = replay.warning;
  }
}

TriageService::~TriageService() {
  if (fd_ >= 0) ::close(fd_);
}

void TriageService::adjust_edge(const EdgeKey& edge, std::optional<Stance> remove, std::optional<Stance> add) {
  EdgeEvidence& ev = evidence_[edge];
  auto before = polarity_of(status_from_evidence(ev));
  if (remove) --ev[index_of(*remove)];
  if (add) ++ev[index_of(*add)];
  auto after = polarity_of(status_from_evidence(ev));
  if (before == after) return;
  if (before && *before != Stance::kNeutral) --stats_.of(*before).new_edges;
  if (after && *after != Stance::kNeutral) ++stats_.of(*after).new_edges;
}

void TriageService::apply(const AnnotationDecision& d) {
  TriageItem& item = items_[index_.at(d.item_id)];
  ClassTriageStats& cs = stats_.of(item.predicted);
  std::optional<Stance> old_label;
  auto prev = latest_.find(d.item_id);
  if (prev == latest_.end()) {
    --cs.pending;
    ++cs.reviewed;
  } else {
    old_label = stance_of(prev->second.verdict);
    if (old_label) {
      --cs.decided;
      if (*old_label == item.predicted) --cs.confirmed;
    } else {
      --cs.skipped;
    }
  }
  std::optional<Stance> new_label = stance_of(d.verdict);
  if (new_label) {
    ++cs.decided;
    if (*new_label == item.predicted) ++cs.confirmed;
    item.state = ItemState::kDecided;
  } else {
    ++cs.skipped;
    item.state = ItemState::kSkipped;
  }
  adjust_edge(item.edge, old_label, new_label);
  latest_[d.item_id] = d;
  log_.push_back(d);
  last_time_ = std::max(last_time_, d.decided_at);
}

std::vector<TriageItem> TriageService::get_next(std::optional<Stance> cls, std::size_t limit) const {
  std::shared_lock lock(mutex_);
  std::vector<TriageItem> out;
  for (const auto& item : items_) {
    if (out.size() >= limit) break;
    if (item.state != ItemState::kPending) continue;
    if (cls && item.predicted != *cls) continue;
    out.push_back(item);
  }
  return out;
}

std::size_t TriageService::pending(std::optional<Stance> cls) const {
  std::shared_lock lock(mutex_);
  std::size_t n = 0;
  for (Stance s : kAllStances) {
    if (!cls || *cls == s) n += static_cast<std::size_t>(stats_.of(s).pending);
  }
  return n;
}

TriageService::Ack TriageService::post_decision(std::int64_t item_id, Verdict verdict,
                                                const std::string& annotator_id) {
  std::unique_lock lock(mutex_);
  if (!index_.count(item_id)) throw InvalidArgument("unknown item_id " + std::to_string(item_id));
  AnnotationDecision d{item_id, verdict, annotator_id, std::max(clock_(), last_time_)};
  std::string line = decision_to_json(d) + "\n";
  const char* p = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error("decision log write failed: " + std::string(std::strerror(errno)));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw Error("decision log fsync failed: " + std::string(std::strerror(errno)));
  apply(d);
  TriageStats s = stats_;
  s.finalize_hit_rates();
  return {d, s};
}

TriageStats TriageService::stats() const {
  std::shared_lock lock(mutex_);
  TriageStats s = stats_;
  s.finalize_hit_rates();
  return s;
}

std::vector<TriageItem> TriageService::items() const {
  std::shared_lock lock(mutex_);
  return items_;
}

std::vector<AnnotationDecision> TriageService::decisions() const {
  std::shared_lock lock(mutex_);
  return log_;
}

}  // namespace stance
