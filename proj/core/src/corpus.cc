#include "stance/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace stance {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kEmptyKeyPrefix = "#empty:";
constexpr std::string_view kAuxKeyPrefix = "#aux:";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("failed reading '" + path + "'");
  return buf.str();
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('\t', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

bool parse_int64(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(std::string(s), &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

struct Record {
  Tweet tweet;
  std::optional<Stance> label;
};

std::optional<Record> parse_json_record(std::string_view line) {
  ordered_json j = ordered_json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  Record r;
  auto get_string = [&](const char* key, std::string& out) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
  };
  if (!get_string("id", r.tweet.id) || r.tweet.id.empty()) return std::nullopt;
  if (!get_string("user_id", r.tweet.user_id)) return std::nullopt;
  if (!get_string("text", r.tweet.raw_text) || r.tweet.raw_text.empty()) return std::nullopt;
  auto ts = j.find("timestamp");
  if (ts == j.end() || !ts->is_number_integer()) return std::nullopt;
  r.tweet.timestamp = ts->get<std::int64_t>();
  if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) return std::nullopt;
    r.label = parse_stance(it->get<std::string>());
    if (!r.label) return std::nullopt;
  }
  if (auto it = j.find("lang"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) return std::nullopt;
    r.tweet.language = it->get<std::string>();
  }
  return r;
}

std::optional<Record> parse_tsv_record(std::string_view line) {
  const auto f = split_tabs(line);
  if (f.size() < 4 || f.size() > 6) return std::nullopt;
  Record r;
  r.tweet.id = std::string(f[0]);
  r.tweet.user_id = std::string(f[1]);
  r.tweet.raw_text = std::string(f[3]);
  if (r.tweet.id.empty() || r.tweet.raw_text.empty()) return std::nullopt;
  if (!parse_int64(f[2], r.tweet.timestamp)) return std::nullopt;
  if (f.size() >= 5 && !f[4].empty()) {
    r.label = parse_stance(f[4]);
    if (!r.label) return std::nullopt;
  }
  if (f.size() == 6 && !f[5].empty()) r.tweet.language = std::string(f[5]);
  return r;
}

}  // namespace

Corpus Corpus::build(std::vector<Tweet> tweets, LabelMap labels, std::set<std::string> train_only) {
  Corpus c;
  c.index_.reserve(tweets.size());
  c.preprocessed_.reserve(tweets.size());
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const Tweet& t = tweets[i];
    if (t.raw_text.empty()) throw InvalidArgument("tweet '" + t.id + "' has empty text");
    if (!c.index_.emplace(t.id, i).second) throw InvalidArgument("duplicate tweet id '" + t.id + "'");
    c.preprocessed_.push_back(preprocess(t.id, t.raw_text));
  }
  for (const auto& [id, label] : labels) {
    if (!c.index_.count(id)) throw InvalidArgument("label for unknown tweet id '" + id + "'");
  }
  for (const auto& id : train_only) {
    if (!c.index_.count(id)) throw InvalidArgument("train-only marker for unknown tweet id '" + id + "'");
  }
  c.tweets_ = std::move(tweets);
  c.labels_ = std::move(labels);
  c.train_only_ = std::move(train_only);
  c.groups_ = group_tweets(c.tweets_, c.preprocessed_, c.train_only_);
  c.group_key_.resize(c.tweets_.size());
  for (const auto& [key, group] : c.groups_) {
    for (const auto& id : group.member_ids) c.group_key_[c.index_.at(id)] = key;
  }
  return c;
}

std::size_t Corpus::index_of_id(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw InvalidArgument("unknown tweet id '" + std::string(id) + "'");
  return it->second;
}

bool Corpus::contains(std::string_view id) const { return index_.count(std::string(id)) > 0; }

const Tweet& Corpus::tweet(std::string_view id) const { return tweets_[index_of_id(id)]; }

const PreprocessedTweet& Corpus::processed(std::string_view id) const {
  return preprocessed_[index_of_id(id)];
}

const TweetGroup& Corpus::group_of(std::string_view id) const {
  return groups_.at(group_key_[index_of_id(id)]);
}

std::optional<StanceLabel> Corpus::label(std::string_view id) const {
  auto it = labels_.find(std::string(id));
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

Corpus Corpus::with_labels(const LabelMap& extra) const {
  for (const auto& [id, label] : extra) {
    if (!contains(id)) throw InvalidArgument("label for unknown tweet id '" + id + "'");
  }
  Corpus copy = *this;
  for (const auto& [id, label] : extra) copy.labels_[id] = label;
  return copy;
}

Corpus parse_corpus(std::string_view content, CorpusFormat format, IngestReport* report) {
  IngestReport local;
  std::vector<Tweet> tweets;
  LabelMap labels;
  std::set<std::string> seen;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      ++local.blank_lines;
      continue;
    }
    auto record = format == CorpusFormat::kJsonLines ? parse_json_record(line) : parse_tsv_record(line);
    if (!record) {
      local.malformed_lines.push_back(i + 1);
      continue;
    }
    if (!seen.insert(record->tweet.id).second) {
      throw InvalidArgument("duplicate tweet id '" + record->tweet.id + "' on line " +
                            std::to_string(i + 1));
    }
    if (record->label) labels[record->tweet.id] = {*record->label, Provenance::kManual};
    tweets.push_back(std::move(record->tweet));
  }
  local.records = tweets.size();
  if (report) *report = local;
  return Corpus::build(std::move(tweets), std::move(labels));
}

Corpus ingest_corpus(const std::string& path, CorpusFormat format, IngestReport* report) {
  return parse_corpus(read_file(path), format, report);
}

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format) {
  std::string out;
  for (const Tweet& t : corpus.tweets()) {
    std::optional<Stance> label;
    if (auto l = corpus.label(t.id); l && l->provenance == Provenance::kManual) label = l->stance;
    if (format == CorpusFormat::kJsonLines) {
      ordered_json j;
      j["id"] = t.id;
      j["user_id"] = t.user_id;
      j["timestamp"] = t.timestamp;
      j["text"] = t.raw_text;
      if (label) j["label"] = std::string(to_string(*label));
      if (t.language) j["lang"] = *t.language;
      out += j.dump(-1, ' ', /*ensure_ascii=*/false);
    } else {
      for (const std::string* field : {&t.id, &t.user_id, &t.raw_text}) {
        if (field->find_first_of("\t\n") != std::string::npos) {
          throw InvalidArgument("tweet '" + t.id + "' cannot be written as TSV (tab or newline in field)");
        }
      }
      out += t.id + '\t' + t.user_id + '\t' + std::to_string(t.timestamp) + '\t' + t.raw_text;
      if (label || t.language) out += '\t' + (label ? std::string(to_string(*label)) : std::string());
      if (t.language) out += '\t' + *t.language;
    }
    out += '\n';
  }
  return out;
}

std::map<std::string, Stance> parse_labels(std::string_view content) {
  std::map<std::string, Stance> labels;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_tabs(lines[i]);
    if (f.size() != 2 || f[0].empty()) {
      throw ParseError("labels line " + std::to_string(i + 1) + ": expected 'tweet_id<TAB>label'");
    }
    auto stance = parse_stance(f[1]);
    if (!stance) {
      throw ParseError("labels line " + std::to_string(i + 1) + ": unknown label '" +
                       std::string(f[1]) + "'");
    }
    if (!labels.emplace(std::string(f[0]), *stance).second) {
      throw ParseError("labels line " + std::to_string(i + 1) + ": duplicate id '" +
                       std::string(f[0]) + "'");
    }
  }
  return labels;
}

std::map<std::string, Stance> load_labels(const std::string& path) {
  return parse_labels(read_file(path));
}

std::string serialize_labels(const LabelMap& labels) {
  std::string out;
  for (const auto& [id, label] : labels) {
    out += id + '\t' + std::string(to_string(label.stance)) + '\n';
  }
  return out;
}

GroupMap group_tweets(const std::vector<Tweet>& tweets,
                      const std::vector<PreprocessedTweet>& preprocessed,
                      const std::set<std::string>& train_only) {
  if (tweets.size() != preprocessed.size()) {
    throw InvalidArgument("group_tweets: tweets and preprocessed lengths differ");
  }
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    std::string key;
    if (preprocessed[i].canonical_key.empty()) {
      key = std::string(kEmptyKeyPrefix) + tweets[i].id;
    } else {
      key = preprocessed[i].canonical_key;
    }
    if (train_only.count(tweets[i].id)) key = std::string(kAuxKeyPrefix) + key;
    members[key].push_back(i);
  }
  GroupMap groups;
  for (auto& [key, idx] : members) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(tweets[a].timestamp, tweets[a].id) < std::tie(tweets[b].timestamp, tweets[b].id);
    });
    TweetGroup g;
    g.key = key;
    auto original = std::find_if(idx.begin(), idx.end(),
                                 [&](std::size_t i) { return !preprocessed[i].is_retweet; });
    g.original_id = tweets[original != idx.end() ? *original : idx.front()].id;
    for (std::size_t i : idx) g.member_ids.push_back(tweets[i].id);
    groups.emplace(key, std::move(g));
  }
  return groups;
}

GroupMap group_tweets(const Corpus& corpus) {
  return group_tweets(corpus.tweets(), corpus.preprocessed(), corpus.train_only());
}

Corpus propagate_labels(const Corpus& corpus) {
  LabelMap extra;
  for (const auto& [key, group] : corpus.groups()) {
    auto original = corpus.label(group.original_id);
    if (!original) continue;
    for (const auto& id : group.member_ids) {
      auto own = corpus.label(id);
      if (!own || own->stance != original->stance) extra[id] = {original->stance, Provenance::kPropagated};
    }
  }
  if (extra.empty()) return corpus;
  return corpus.with_labels(extra);
}

Corpus merge_auxiliary(const Corpus& corpus, const Corpus& aux, Stance fixed_label) {
  if (aux.empty()) return corpus;
  std::vector<Tweet> tweets = corpus.tweets();
  LabelMap labels = corpus.labels();
  std::set<std::string> train_only = corpus.train_only();
  for (const Tweet& t : aux.tweets()) {
    if (corpus.contains(t.id)) {
      throw InvalidArgument("auxiliary tweet id '" + t.id + "' collides with the main corpus");
    }
    tweets.push_back(t);
    labels[t.id] = {fixed_label, Provenance::kManual};
    train_only.insert(t.id);
  }
  return Corpus::build(std::move(tweets), std::move(labels), std::move(train_only));
}

std::vector<std::string> labeled_originals(const Corpus& corpus) {
  std::vector<std::string> ids;
  for (const auto& [key, group] : corpus.groups()) {
    if (corpus.is_train_only(group.original_id)) continue;
    if (corpus.label(group.original_id)) ids.push_back(group.original_id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace stance
