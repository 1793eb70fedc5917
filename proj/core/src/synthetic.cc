#include "stance/synthetic.h"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "stance/rng.h"

namespace stance {
namespace {

constexpr std::array<const char*, kNumClasses> kTriggerPrefix = {"rkey", "ukey", "nkey"};
constexpr std::array<const char*, kNumClasses> kClassHashtag = {"#prorussia", "#proukraine", "#newsdesk"};

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace

std::array<std::size_t, kNumClasses> apportion(std::size_t total, const std::array<double, kNumClasses>& weights) {
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) throw InvalidArgument("apportion: weights must be positive");
  std::array<std::size_t, kNumClasses> counts{};
  std::array<double, kNumClasses> rem{};
  std::size_t assigned = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    double exact = static_cast<double>(total) * weights[c] / sum;
    counts[c] = static_cast<std::size_t>(exact);
    rem[c] = exact - static_cast<double>(counts[c]);
    assigned += counts[c];
  }
  std::array<int, kNumClasses> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++counts[order[i % kNumClasses]];
  return counts;
}

SyntheticData make_synthetic(const SyntheticOptions& o) {
  if (o.num_tweets < 10 || o.dim < 1 || o.min_len < 2 || o.max_len < o.min_len || o.num_users < 2) {
    throw InvalidArgument("make_synthetic: bad options");
  }
  Rng emb_rng = Rng::derive(o.seed, "synthetic-embeddings");
  Rng text_rng = Rng::derive(o.seed, "synthetic-text");
  Rng noise_rng = Rng::derive(o.seed, "synthetic-noise");
  Rng graph_rng = Rng::derive(o.seed, "synthetic-graph");

  SyntheticData out;
  EmbeddingTable table(o.dim);
  std::vector<double> v(static_cast<std::size_t>(o.dim));
  std::array<std::vector<double>, kNumClasses> centroid;
  for (auto& c : centroid) {
    c.resize(v.size());
    for (auto& x : c) x = emb_rng.normal(0.0, o.centroid_scale);
  }
  std::array<std::vector<std::string>, kNumClasses> triggers;
  for (int c = 0; c < kNumClasses; ++c) {
    for (int i = 0; i < o.triggers_per_class; ++i) {
      std::string tok = numbered(kTriggerPrefix[c], static_cast<std::size_t>(i), 2);
      for (std::size_t d = 0; d < v.size(); ++d) v[d] = centroid[c][d] + emb_rng.normal(0.0, o.trigger_spread);
      table.add(tok, v);
      triggers[c].push_back(tok);
    }
  }
  std::vector<std::string> filler;
  for (int i = 0; i < o.filler_vocab; ++i) {
    std::string tok = numbered("w", static_cast<std::size_t>(i), 3);
    for (auto& x : v) x = emb_rng.normal(0.0, o.filler_scale);
    table.add(tok, v);
    filler.push_back(tok);
  }

  // True classes in shuffled order.
  auto counts = apportion(o.num_tweets, o.class_weights);
  std::vector<Stance> classes;
  for (int c = 0; c < kNumClasses; ++c) classes.insert(classes.end(), counts[c], stance_at(c));
  std::shuffle(classes.begin(), classes.end(), text_rng.engine());

  std::discrete_distribution<int> prior(o.class_weights.begin(), o.class_weights.end());
  std::vector<std::string> users;
  for (std::size_t u = 0; u < o.num_users; ++u) users.push_back(numbered("u", u, 4));
  // Each user leans to a camp drawn from the prior.
  std::vector<Stance> camp;
  for (std::size_t u = 0; u < o.num_users; ++u) camp.push_back(stance_at(prior(graph_rng.engine())));

  std::vector<Tweet> tweets;
  LabelMap labels;
  std::array<std::vector<std::size_t>, kNumClasses> originals_by_class;
  const std::int64_t t0 = 1404950400;
  for (std::size_t i = 0; i < o.num_tweets; ++i) {
    Stance cls = classes[i];
    int c = index_of(cls);
    int len = o.min_len + static_cast<int>(text_rng.uniform_index(static_cast<std::size_t>(o.max_len - o.min_len + 1)));
    std::vector<std::string> words;
    for (int k = 0; k < len; ++k) words.push_back(filler[text_rng.uniform_index(filler.size())]);
    int n_trig = 1 + static_cast<int>(text_rng.uniform_index(2));
    for (int k = 0; k < n_trig; ++k) {
      words[text_rng.uniform_index(words.size())] = triggers[c][text_rng.uniform_index(triggers[c].size())];
    }
    if (text_rng.bernoulli(o.class_hashtag_rate)) words.push_back(kClassHashtag[c]);
    if (text_rng.bernoulli(o.generic_hashtag_rate)) words.push_back("#mh17");
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }

    Tweet t;
    t.id = numbered("t", i, 5);
    // Authors come from the matching camp when one exists.
    std::size_t author = graph_rng.uniform_index(users.size());
    for (int tries = 0; tries < 20 && camp[author] != cls; ++tries) author = graph_rng.uniform_index(users.size());
    t.user_id = users[author];
    t.timestamp = t0 + static_cast<std::int64_t>(i) * 60;
    t.raw_text = std::move(text);
    t.language = "en";

    Stance observed = noise_rng.bernoulli(o.label_noise) ? stance_at(prior(noise_rng.engine())) : cls;
    labels[t.id] = {observed, Provenance::kManual};
    out.true_class[t.id] = cls;
    originals_by_class[c].push_back(tweets.size());
    tweets.push_back(std::move(t));
  }

  const std::size_t n_orig = tweets.size();
  for (std::size_t r = 0; r < o.num_retweets; ++r) {
    std::size_t u = graph_rng.uniform_index(users.size());
    const auto& pool = originals_by_class[index_of(camp[u])];
    std::size_t src = (!pool.empty() && graph_rng.bernoulli(o.homophily)) ? pool[graph_rng.uniform_index(pool.size())]
                                                                         : graph_rng.uniform_index(n_orig);
    const Tweet& orig = tweets[src];
    Tweet t;
    t.id = numbered("r", r, 5);
    t.user_id = users[u];
    t.timestamp = orig.timestamp + 1 + static_cast<std::int64_t>(graph_rng.uniform_index(86400));
    t.raw_text = "RT @" + orig.user_id + ": " + orig.raw_text;
    t.language = "en";
    tweets.push_back(std::move(t));
  }

  out.corpus = Corpus::build(std::move(tweets), std::move(labels));
  out.embeddings = std::move(table);
  return out;
}

}  // namespace stance
