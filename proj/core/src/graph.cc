#include "stance/graph.h"

#include <algorithm>
#include <deque>
#include <sstream>

#include "json.hpp"

namespace stance {
namespace {

constexpr std::array<std::string_view, 5> kStatusNames = {"unlabeled", "pro_russian", "pro_ukrainian",
                                                          "neutral", "conflicted"};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool polarized(Stance s) { return s != Stance::kNeutral; }

}  // namespace

EdgeKey EdgeKey::of(std::string u, std::string v) {
  if (v < u) std::swap(u, v);
  return {std::move(u), std::move(v)};
}

EdgeKey EdgeKey::parse(std::string_view text) {
  std::size_t bar = text.find('|');
  if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos) {
    throw ParseError("bad edge key: " + std::string(text));
  }
  std::string a(text.substr(0, bar));
  std::string b(text.substr(bar + 1));
  if (a.empty() || b.empty() || a == b) throw ParseError("bad edge key: " + std::string(text));
  return of(std::move(a), std::move(b));
}

std::string_view to_string(EdgeStatus s) { return kStatusNames[static_cast<std::size_t>(s)]; }

EdgeStatus edge_status_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == name) return static_cast<EdgeStatus>(i);
  }
  throw ParseError("unknown edge status: " + std::string(name));
}

std::optional<Stance> polarity_of(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::kProRussian: return Stance::kProRussian;
    case EdgeStatus::kProUkrainian: return Stance::kProUkrainian;
    case EdgeStatus::kNeutral: return Stance::kNeutral;
    default: return std::nullopt;
  }
}

EdgeStatus status_from_evidence(const EdgeEvidence& evidence) {
  bool r = evidence[index_of(Stance::kProRussian)] > 0;
  bool u = evidence[index_of(Stance::kProUkrainian)] > 0;
  if (r && u) return EdgeStatus::kConflicted;
  if (r) return EdgeStatus::kProRussian;
  if (u) return EdgeStatus::kProUkrainian;
  if (evidence[index_of(Stance::kNeutral)] > 0) return EdgeStatus::kNeutral;
  return EdgeStatus::kUnlabeled;
}

bool RetweetGraph::add_retweet(const std::string& retweeter, const std::string& author,
                               const std::string& tweet_id) {
  if (retweeter == author) return false;
  nodes_.insert(retweeter);
  nodes_.insert(author);
  edges_[EdgeKey::of(retweeter, author)].tweet_ids.insert(tweet_id);
  return true;
}

void RetweetGraph::add_edge(const EdgeKey& key, EdgeRecord record) {
  if (key.a == key.b) throw InvalidArgument("self-loop edge: " + key.a);
  nodes_.insert(key.a);
  nodes_.insert(key.b);
  edges_[key] = std::move(record);
}

const EdgeRecord* RetweetGraph::find(const EdgeKey& key) const {
  auto it = edges_.find(key);
  return it == edges_.end() ? nullptr : &it->second;
}

std::map<std::string, std::set<std::string>> RetweetGraph::adjacency() const {
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& n : nodes_) adj[n];
  for (const auto& [key, rec] : edges_) {
    adj[key.a].insert(key.b);
    adj[key.b].insert(key.a);
  }
  return adj;
}

RetweetGraph RetweetGraph::induced(const std::set<std::string>& keep) const {
  RetweetGraph out;
  for (const auto& n : nodes_) {
    if (keep.count(n)) out.nodes_.insert(n);
  }
  for (const auto& [key, rec] : edges_) {
    if (keep.count(key.a) && keep.count(key.b)) out.edges_.emplace(key, rec);
  }
  return out;
}

RetweetGraph build_graph(const Corpus& corpus, GraphBuildReport* report) {
  GraphBuildReport local;
  RetweetGraph graph;
  for (const auto& tweet : corpus.tweets()) {
    const PreprocessedTweet& pre = corpus.processed(tweet.id);
    if (!pre.is_retweet) continue;
    ++local.retweets;
    std::optional<std::string> author;
    const TweetGroup& group = corpus.group_of(tweet.id);
    if (group.original_id != tweet.id && !corpus.processed(group.original_id).is_retweet) {
      author = corpus.tweet(group.original_id).user_id;
    } else if (pre.retweet_of) {
      author = *pre.retweet_of;
    }
    if (!author) {
      ++local.unresolved;
      continue;
    }
    if (!graph.add_retweet(tweet.user_id, *author, tweet.id)) ++local.self_retweets;
  }
  if (report) *report = local;
  return graph;
}

RetweetGraph k_core(const RetweetGraph& graph, int k) {
  if (k < 1) throw InvalidArgument("k_core: k must be >= 1");
  auto adj = graph.adjacency();
  std::map<std::string, std::size_t> degree;
  std::deque<std::string> queue;
  std::set<std::string> removed;
  for (const auto& [n, nbrs] : adj) {
    degree[n] = nbrs.size();
    if (nbrs.size() < static_cast<std::size_t>(k)) {
      queue.push_back(n);
      removed.insert(n);
    }
  }
  while (!queue.empty()) {
    std::string n = std::move(queue.front());
    queue.pop_front();
    for (const auto& m : adj[n]) {
      if (removed.count(m)) continue;
      if (--degree[m] < static_cast<std::size_t>(k)) {
        removed.insert(m);
        queue.push_back(m);
      }
    }
  }
  std::set<std::string> keep;
  for (const auto& n : graph.nodes()) {
    if (!removed.count(n)) keep.insert(n);
  }
  return graph.induced(keep);
}

RetweetGraph label_edges(const RetweetGraph& graph, const LabelMap& labels) {
  RetweetGraph out = graph;
  for (auto& [key, rec] : out.mutable_edges()) {
    EdgeEvidence ev{};
    for (const auto& id : rec.tweet_ids) {
      auto it = labels.find(id);
      if (it != labels.end()) ++ev[index_of(it->second.stance)];
    }
    rec.label = {status_from_evidence(ev), ev};
  }
  return out;
}

std::vector<CandidateEdge> candidate_edges(const RetweetGraph& graph, const std::map<std::string, ProbDist>& predictions,
                                           std::span<const Calibration> calibrations) {
  std::vector<CandidateEdge> out;
  for (const auto& [key, rec] : graph.edges()) {
    if (rec.label.status != EdgeStatus::kUnlabeled) continue;
    std::vector<CandidateEdge> here;
    for (const auto& cal : calibrations) {
      if (!cal.achieved || !polarized(cal.stance)) continue;
      CandidateEdge cand{key, cal.stance, {}, false};
      for (const auto& id : rec.tweet_ids) {
        auto it = predictions.find(id);
        if (it == predictions.end()) continue;
        double p = it->second[cal.stance];
        if (p >= cal.threshold) cand.support.push_back({id, p});
      }
      if (cand.support.empty()) continue;
      std::sort(cand.support.begin(), cand.support.end(), [](const auto& x, const auto& y) {
        return x.confidence != y.confidence ? x.confidence > y.confidence : x.tweet_id < y.tweet_id;
      });
      here.push_back(std::move(cand));
    }
    bool has_r = false, has_u = false;
    for (const auto& c : here) {
      has_r |= c.stance == Stance::kProRussian;
      has_u |= c.stance == Stance::kProUkrainian;
    }
    for (auto& c : here) {
      c.conflicting = has_r && has_u;
      out.push_back(std::move(c));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const CandidateEdge& x, const CandidateEdge& y) {
    if (x.max_confidence() != y.max_confidence()) return x.max_confidence() > y.max_confidence();
    if (x.edge != y.edge) return x.edge < y.edge;
    return index_of(x.stance) < index_of(y.stance);
  });
  return out;
}

void TriageStats::finalize_hit_rates() {
  for (auto& c : per_class) {
    if (c.reviewed > 0) {
      c.hit_rate = static_cast<double>(c.new_edges) / static_cast<double>(c.reviewed);
    } else {
      c.hit_rate.reset();
    }
  }
}

ApplyResult apply_decisions(const RetweetGraph& graph, const LabelMap& labels,
                            std::span<const ReviewedTweet> decisions) {
  std::map<std::string, EdgeKey> edge_of_tweet;
  for (const auto& [key, rec] : graph.edges()) {
    for (const auto& id : rec.tweet_ids) edge_of_tweet.emplace(id, key);
  }

  ApplyResult result;
  std::map<std::string, const ReviewedTweet*> latest;
  for (const auto& d : decisions) {
    if (!edge_of_tweet.count(d.tweet_id)) {
      result.rejected.push_back("unknown tweet: " + d.tweet_id);
      continue;
    }
    latest[d.tweet_id] = &d;
  }

  result.labels = labels;
  for (const auto& [id, d] : latest) {
    ClassTriageStats& cs = result.stats.of(d->predicted);
    ++cs.reviewed;
    if (!d->verdict) {
      ++cs.skipped;
      continue;
    }
    ++cs.decided;
    if (*d->verdict == d->predicted) ++cs.confirmed;
    result.labels[id] = {*d->verdict, Provenance::kTriageConfirmed};
  }

  result.graph = label_edges(graph, result.labels);
  for (const auto& [key, rec] : graph.edges()) {
    if (rec.label.status != EdgeStatus::kUnlabeled) continue;
    auto now = polarity_of(result.graph.find(key)->label.status);
    if (now && polarized(*now)) ++result.stats.of(*now).new_edges;
  }
  result.stats.finalize_hit_rates();
  return result;
}

std::string format_graph(const RetweetGraph& graph) {
  std::string out;
  for (const auto& [key, rec] : graph.edges()) {
    out += key.a;
    out += '\t';
    out += key.b;
    out += '\t';
    out += to_string(rec.label.status);
    out += '\t';
    bool first = true;
    for (const auto& id : rec.tweet_ids) {
      if (!first) out += ',';
      out += id;
      first = false;
    }
    out += '\n';
  }
  return out;
}

RetweetGraph parse_graph(std::string_view content) {
  RetweetGraph graph;
  std::size_t line_no = 0;
  for (auto line : split(content, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty() || fields[3].empty()) {
      throw ParseError("graph line " + std::to_string(line_no) + ": expected 4 tab-separated fields");
    }
    EdgeKey key = EdgeKey::of(std::string(fields[0]), std::string(fields[1]));
    if (key.a == key.b) throw ParseError("graph line " + std::to_string(line_no) + ": self-loop");
    EdgeRecord rec;
    rec.label.status = edge_status_from_string(fields[2]);
    for (auto id : split(fields[3], ',')) {
      if (id.empty()) throw ParseError("graph line " + std::to_string(line_no) + ": empty tweet id");
      rec.tweet_ids.emplace(id);
    }
    graph.add_edge(key, std::move(rec));
  }
  return graph;
}

EdgeSummary summarize_edges(const RetweetGraph& graph, std::span<const CandidateEdge> candidates,
                            const TriageStats* stats) {
  EdgeSummary s;
  s.total_edges = static_cast<std::int64_t>(graph.num_edges());
  for (const auto& [key, rec] : graph.edges()) {
    if (rec.label.status == EdgeStatus::kConflicted) {
      ++s.conflicted;
    } else if (auto p = polarity_of(rec.label.status)) {
      ++s.labeled[index_of(*p)];
    }
  }
  std::set<EdgeKey> distinct;
  for (const auto& c : candidates) {
    ++s.candidates[index_of(c.stance)];
    distinct.insert(c.edge);
  }
  s.candidate_edges = static_cast<std::int64_t>(distinct.size());
  if (stats) {
    for (int i = 0; i < kNumClasses; ++i) s.added[i] = stats->per_class[i].new_edges;
  }
  return s;
}

std::string format_edge_summary(const EdgeSummary& s) {
  std::ostringstream out;
  auto row = [&](std::string_view name, const std::array<std::int64_t, kNumClasses>& v, std::int64_t total,
                 bool with_neutral) {
    out << name << '\t' << v[0] << '\t' << v[1] << '\t';
    if (with_neutral) {
      out << v[2];
    } else {
      out << '-';
    }
    out << '\t' << total << '\n';
  };
  out << "row\tpro_russian\tpro_ukrainian\tneutral\ttotal\n";
  row("labeled_edges", s.labeled, s.labeled[0] + s.labeled[1] + s.labeled[2], true);
  out << "conflicted_edges\t-\t-\t-\t" << s.conflicted << '\n';
  row("candidate_edges", s.candidates, s.candidate_edges, false);
  row("added_after_filtering", s.added, s.added[0] + s.added[1], false);
  out << "total_edges\t-\t-\t-\t" << s.total_edges << '\n';
  return out.str();
}

std::string candidates_json(std::span<const CandidateEdge> candidates) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : candidates) {
    nlohmann::ordered_json j;
    j["user_a"] = c.edge.a;
    j["user_b"] = c.edge.b;
    j["class"] = std::string(to_string(c.stance));
    j["conflicting"] = c.conflicting;
    nlohmann::ordered_json sup = nlohmann::ordered_json::array();
    for (const auto& t : c.support) {
      sup.push_back(nlohmann::ordered_json{{"tweet_id", t.tweet_id}, {"confidence", t.confidence}});
    }
    j["support"] = std::move(sup);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<CandidateEdge> parse_candidates(std::string_view json) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("candidates: ") + e.what());
  }
  if (!arr.is_array()) throw ParseError("candidates: expected an array");
  std::vector<CandidateEdge> out;
  try {
    for (const auto& j : arr) {
      CandidateEdge c;
      c.edge = EdgeKey::of(j.at("user_a").get<std::string>(), j.at("user_b").get<std::string>());
      c.stance = stance_from_string(j.at("class").get<std::string>());
      c.conflicting = j.value("conflicting", false);
      for (const auto& t : j.at("support")) {
        c.support.push_back({t.at("tweet_id").get<std::string>(), t.at("confidence").get<double>()});
      }
      out.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("candidates: ") + e.what());
  }
  return out;
}

}  // namespace stance
