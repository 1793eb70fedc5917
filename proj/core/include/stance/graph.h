#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stance/corpus.h"
#include "stance/metrics.h"
#include "stance/prob.h"

namespace stance {

// Unordered user pair, stored with a < b.
struct EdgeKey {
  std::string a;
  std::string b;

  static EdgeKey of(std::string u, std::string v);
  std::string to_string() const { return a + '|' + b; }
  static EdgeKey parse(std::string_view text);  // inverse of to_string

  auto operator<=>(const EdgeKey&) const = default;
};

enum class EdgeStatus { kUnlabeled, kProRussian, kProUkrainian, kNeutral, kConflicted };

std::string_view to_string(EdgeStatus s);
EdgeStatus edge_status_from_string(std::string_view name);
std::optional<Stance> polarity_of(EdgeStatus s);  // R/U/N for the single-class statuses

// Labeled tweets on an edge, per class.
using EdgeEvidence = std::array<std::int64_t, kNumClasses>;

// Any pro-Russian and no pro-Ukrainian tweet -> ProRussian (and vice versa);
// both -> Conflicted; only neutral -> Neutral; nothing labeled -> Unlabeled.
EdgeStatus status_from_evidence(const EdgeEvidence& evidence);

struct EdgeLabel {
  EdgeStatus status = EdgeStatus::kUnlabeled;
  EdgeEvidence evidence{};

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

struct EdgeRecord {
  std::set<std::string> tweet_ids;
  EdgeLabel label;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

// Undirected retweet graph over user ids.
class RetweetGraph {
 public:
  // Returns false (and adds nothing) for a self-retweet.
  bool add_retweet(const std::string& retweeter, const std::string& author, const std::string& tweet_id);
  void add_node(const std::string& user) { nodes_.insert(user); }
  void add_edge(const EdgeKey& key, EdgeRecord record);

  const std::set<std::string>& nodes() const { return nodes_; }
  const std::map<EdgeKey, EdgeRecord>& edges() const { return edges_; }
  std::map<EdgeKey, EdgeRecord>& mutable_edges() { return edges_; }
  const EdgeRecord* find(const EdgeKey& key) const;

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  // Distinct neighbours per node.
  std::map<std::string, std::set<std::string>> adjacency() const;
  // Subgraph induced by `keep`.
  RetweetGraph induced(const std::set<std::string>& keep) const;

  friend bool operator==(const RetweetGraph&, const RetweetGraph&) = default;

 private:
  std::set<std::string> nodes_;
  std::map<EdgeKey, EdgeRecord> edges_;
};

struct GraphBuildReport {
  std::size_t retweets = 0;
  std::size_t self_retweets = 0;
  std::size_t unresolved = 0;  // retweets whose author could not be determined
};

// A retweet points at the author of its group's original. When the group has
// no non-retweet member, the handle from the `RT @name:` prefix is used as the
// author's user id.
RetweetGraph build_graph(const Corpus& corpus, GraphBuildReport* report = nullptr);

// Repeatedly removes nodes with fewer than k distinct neighbours.
RetweetGraph k_core(const RetweetGraph& graph, int k);

// Recomputes every edge label from the tweet labels.
RetweetGraph label_edges(const RetweetGraph& graph, const LabelMap& labels);

struct SupportingTweet {
  std::string tweet_id;
  double confidence = 0.0;

  friend bool operator==(const SupportingTweet&, const SupportingTweet&) = default;
};

struct CandidateEdge {
  EdgeKey edge;
  Stance stance = Stance::kProRussian;
  std::vector<SupportingTweet> support;  // confidence descending, then id
  bool conflicting = false;              // the edge is also a candidate for the other polarity

  double max_confidence() const { return support.empty() ? 0.0 : support.front().confidence; }
  friend bool operator==(const CandidateEdge&, const CandidateEdge&) = default;
};

// Confident polarized predictions on unlabeled edges, one candidate per
// (edge, class), ranked by their best supporting confidence. Only classes with
// an achieved calibration participate.
std::vector<CandidateEdge> candidate_edges(const RetweetGraph& graph, const std::map<std::string, ProbDist>& predictions,
                                           std::span<const Calibration> calibrations);

// A reviewed tweet: the class it was queued under and the human verdict
// (nullopt for a skip).
struct ReviewedTweet {
  std::string tweet_id;
  Stance predicted = Stance::kProRussian;
  std::optional<Stance> verdict;
};

struct ClassTriageStats {
  std::int64_t pending = 0;
  std::int64_t reviewed = 0;  // decided + skipped
  std::int64_t decided = 0;
  std::int64_t skipped = 0;
  std::int64_t confirmed = 0;  // verdict equals the predicted class
  std::int64_t new_edges = 0;  // previously unlabeled edges now carrying this class
  std::optional<double> hit_rate;  // new_edges / reviewed; empty when nothing was reviewed

  friend bool operator==(const ClassTriageStats&, const ClassTriageStats&) = default;
};

// Indexed by class; neutral stays zero since only polarized predictions are triaged.
struct TriageStats {
  std::array<ClassTriageStats, kNumClasses> per_class{};

  ClassTriageStats& of(Stance s) { return per_class[static_cast<std::size_t>(index_of(s))]; }
  const ClassTriageStats& of(Stance s) const { return per_class[static_cast<std::size_t>(index_of(s))]; }
  void finalize_hit_rates();

  friend bool operator==(const TriageStats&, const TriageStats&) = default;
};

struct ApplyResult {
  RetweetGraph graph;
  LabelMap labels;                  // input labels plus TriageConfirmed verdicts
  TriageStats stats;
  std::vector<std::string> rejected;  // one message per rejected decision
};

// Merges human verdicts into the tweet labels and relabels the graph. For
// repeated decisions on one tweet the last one wins.
ApplyResult apply_decisions(const RetweetGraph& graph, const LabelMap& labels,
                            std::span<const ReviewedTweet> decisions);

// `user_a<TAB>user_b<TAB>status<TAB>tweet_ids` (comma-joined), sorted by edge.
std::string format_graph(const RetweetGraph& graph);
RetweetGraph parse_graph(std::string_view content);

// Table-style summary: labeled edges, candidate edges and edges added after
// review, per class.
struct EdgeSummary {
  std::array<std::int64_t, kNumClasses> labeled{};
  std::int64_t conflicted = 0;
  std::int64_t total_edges = 0;
  std::array<std::int64_t, kNumClasses> candidates{};
  std::int64_t candidate_edges = 0;  // distinct edges
  std::array<std::int64_t, kNumClasses> added{};
};

EdgeSummary summarize_edges(const RetweetGraph& graph, std::span<const CandidateEdge> candidates,
                            const TriageStats* stats = nullptr);
std::string format_edge_summary(const EdgeSummary& summary);

std::string candidates_json(std::span<const CandidateEdge> candidates);
std::vector<CandidateEdge> parse_candidates(std::string_view json);

}  // namespace stance
