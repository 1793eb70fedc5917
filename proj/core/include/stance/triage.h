#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stance/corpus.h"
#include "stance/graph.h"

namespace stance {

enum class ItemState { kPending, kDecided, kSkipped };
enum class Verdict { kProRussian, kProUkrainian, kNeutral, kSkip };

std::string_view to_string(ItemState s);
std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view name);
std::optional<Stance> stance_of(Verdict v);  // nullopt for kSkip

struct TriageItem {
  std::int64_t item_id = 0;
  std::string tweet_id;
  std::string raw_text;
  Stance predicted = Stance::kProRussian;
  double confidence = 0.0;
  EdgeKey edge;
  ItemState state = ItemState::kPending;

  friend bool operator==(const TriageItem&, const TriageItem&) = default;
};

struct AnnotationDecision {
  std::int64_t item_id = 0;
  Verdict verdict = Verdict::kSkip;
  std::string annotator_id;
  std::int64_t decided_at = 0;  // milliseconds since epoch

  friend bool operator==(const AnnotationDecision&, const AnnotationDecision&) = default;
};

// One item per tweet (highest confidence wins, then lower class index),
// ordered by confidence descending then tweet id; item ids count from 1.
// `corpus` supplies the tweet text when given.
std::vector<TriageItem> build_queue(std::span<const CandidateEdge> candidates, const Corpus* corpus = nullptr);

// JSON lines, one item per line. States are not stored; they come from the log.
std::string format_queue(std::span<const TriageItem> items);
std::vector<TriageItem> parse_queue(std::string_view content);
std::vector<TriageItem> load_queue(const std::string& path);

std::string decision_to_json(const AnnotationDecision& d);
AnnotationDecision decision_from_json(std::string_view line);  // throws ParseError

// Latest decision per item, as reviewed tweets for apply_decisions.
std::vector<ReviewedTweet> reviewed_tweets(std::span<const TriageItem> queue,
                                           std::span<const AnnotationDecision> decisions);

std::string stats_json(const TriageStats& stats);
std::string item_json(const TriageItem& item);

struct RecoveryReport {
  std::size_t replayed = 0;
  std::size_t truncated_bytes = 0;
  std::string warning;  // empty unless a corrupt tail was dropped
};

// Reads a decision log without modifying it.
struct ReplayResult {
  std::vector<AnnotationDecision> decisions;
  std::size_t valid_bytes = 0;  // prefix length holding complete, valid lines
  std::string warning;
};
ReplayResult read_decision_log(const std::string& path);

// Serves one queue, persisting decisions to an append-only log. Readers run
// concurrently; writers are serialized and every decision is flushed to disk
// before post_decision returns.
class TriageService {
 public:
  using Clock = std::function<std::int64_t()>;
  static std::int64_t system_clock_ms();

  // Opens (creating if needed) `log_path` and replays it. A corrupt trailing
  // line is truncated from the file and reported; corruption elsewhere throws.
  TriageService(std::vector<TriageItem> queue, std::string log_path, Clock clock = system_clock_ms,
                RecoveryReport* report = nullptr);
  ~TriageService();
  TriageService(const TriageService&) = delete;
  TriageService& operator=(const TriageService&) = delete;

  // Up to `limit` pending items (optionally of one class), highest confidence first.
  std::vector<TriageItem> get_next(std::optional<Stance> cls, std::size_t limit) const;
  std::size_t pending(std::optional<Stance> cls) const;

  struct Ack {
    AnnotationDecision decision;
    TriageStats stats;
  };
  // Throws InvalidArgument for an unknown item id.
  Ack post_decision(std::int64_t item_id, Verdict verdict, const std::string& annotator_id);

  TriageStats stats() const;
  std::vector<TriageItem> items() const;
  std::vector<AnnotationDecision> decisions() const;

 private:
  void apply(const AnnotationDecision& d);
  void adjust_edge(const EdgeKey& edge, std::optional<Stance> remove, std::optional<Stance> add);

  mutable std::shared_mutex mutex_;
  std::vector<TriageItem> items_;
  std::map<std::int64_t, std::size_t> index_;
  std::map<std::int64_t, AnnotationDecision> latest_;
  std::map<EdgeKey, EdgeEvidence> evidence_;
  std::vector<AnnotationDecision> log_;
  TriageStats stats_;
  std::string log_path_;
  int fd_ = -1;
  Clock clock_;
  std::int64_t last_time_ = 0;
};

}  // namespace stance
