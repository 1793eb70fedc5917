#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stance/text.h"
#include "stance/types.h"

namespace stance {

struct Tweet {
  std::string id;
  std::string user_id;
  std::int64_t timestamp = 0;  // seconds since epoch
  std::string raw_text;
  std::optional<std::string> language;

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

// Tweets sharing a canonical key: one original plus its retweets and duplicates.
struct TweetGroup {
  std::string key;
  std::string original_id;
  // All members including the original, ordered by (timestamp, id).
  std::vector<std::string> member_ids;

  friend bool operator==(const TweetGroup&, const TweetGroup&) = default;
};

using GroupMap = std::map<std::string, TweetGroup>;
using LabelMap = std::map<std::string, StanceLabel>;

enum class CorpusFormat { kJsonLines, kTsv };

struct IngestReport {
  std::size_t records = 0;
  std::size_t blank_lines = 0;
  std::vector<std::size_t> malformed_lines;  // 1-based line numbers
};

// Immutable collection of tweets with their preprocessing, groups and labels.
// Every "modifying" operation returns a new Corpus.
class Corpus {
 public:
  Corpus() = default;

  // Preprocesses and groups `tweets`. Throws InvalidArgument on a duplicate id,
  // an empty text, or a label/train-only id that names no tweet.
  static Corpus build(std::vector<Tweet> tweets, LabelMap labels = {},
                      std::set<std::string> train_only = {});

  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }

  const std::vector<Tweet>& tweets() const { return tweets_; }
  const std::vector<PreprocessedTweet>& preprocessed() const { return preprocessed_; }
  const LabelMap& labels() const { return labels_; }
  const GroupMap& groups() const { return groups_; }
  // Auxiliary tweets usable for training but never for evaluation.
  const std::set<std::string>& train_only() const { return train_only_; }

  bool contains(std::string_view id) const;
  const Tweet& tweet(std::string_view id) const;
  const PreprocessedTweet& processed(std::string_view id) const;
  const TweetGroup& group_of(std::string_view id) const;
  std::optional<StanceLabel> label(std::string_view id) const;
  bool is_train_only(std::string_view id) const { return train_only_.count(std::string(id)) > 0; }

  // Copy with `extra` labels merged in (existing entries are overwritten).
  Corpus with_labels(const LabelMap& extra) const;

 private:
  std::size_t index_of_id(std::string_view id) const;

  std::vector<Tweet> tweets_;
  std::vector<PreprocessedTweet> preprocessed_;
  std::unordered_map<std::string, std::size_t> index_;
  LabelMap labels_;
  GroupMap groups_;
  std::vector<std::string> group_key_;  // parallel to tweets_
  std::set<std::string> train_only_;
};

// Reads a corpus file. Malformed records are skipped and reported; an
// unreadable file or a repeated id throws.
Corpus ingest_corpus(const std::string& path, CorpusFormat format = CorpusFormat::kJsonLines,
                     IngestReport* report = nullptr);
Corpus parse_corpus(std::string_view content, CorpusFormat format = CorpusFormat::kJsonLines,
                    IngestReport* report = nullptr);

// Inverse of parse_corpus for well-formed records. Only manual labels are
// written; derived labels go to a labels file.
std::string serialize_corpus(const Corpus& corpus, CorpusFormat format = CorpusFormat::kJsonLines);

// `tweet_id<TAB>label` lines.
std::map<std::string, Stance> load_labels(const std::string& path);
std::map<std::string, Stance> parse_labels(std::string_view content);
std::string serialize_labels(const LabelMap& labels);

// Partitions tweets by canonical key. The original of a group is its earliest
// non-retweet member (ties: smallest id); a group of retweets only falls back
// to its earliest member. Tweets with an empty key stay singletons, and
// train-only tweets never share a group with regular ones.
GroupMap group_tweets(const std::vector<Tweet>& tweets,
                      const std::vector<PreprocessedTweet>& preprocessed,
                      const std::set<std::string>& train_only = {});
GroupMap group_tweets(const Corpus& corpus);

// Copies each labeled original's class onto every member of its group. Members
// whose own label disagrees are overwritten.
Corpus propagate_labels(const Corpus& corpus);

// Appends `aux` as train-only tweets carrying `fixed_label`.
Corpus merge_auxiliary(const Corpus& corpus, const Corpus& aux, Stance fixed_label);

// Ids of labeled group originals that may enter dev/test folds, sorted.
std::vector<std::string> labeled_originals(const Corpus& corpus);

}  // namespace stance
