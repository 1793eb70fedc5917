#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "stance/corpus.h"
#include "stance/embeddings.h"

namespace stance {

// Generator for a labeled toy corpus with known structure. Each original
// carries one or two trigger tokens of its true class among filler words;
// trigger embeddings sit near a per-class centroid. Observed labels are the
// true class except that, with probability `label_noise`, they are redrawn
// from the class prior.
struct SyntheticOptions {
  std::uint64_t seed = 1;
  std::size_t num_tweets = 1500;
  std::array<double, kNumClasses> class_weights{512, 910, 6923};
  double label_noise = 0.2;

  int dim = 20;
  int triggers_per_class = 12;
  int filler_vocab = 300;
  int min_len = 6;
  int max_len = 20;
  double centroid_scale = 1.0;
  double trigger_spread = 0.3;
  double filler_scale = 0.5;  // stddev of filler vector components

  double class_hashtag_rate = 0.5;     // originals carrying their class hashtag
  double generic_hashtag_rate = 0.3;   // any original carrying a shared hashtag

  std::size_t num_users = 200;
  std::size_t num_retweets = 900;
  double homophily = 0.85;  // chance a retweet picks an original of the retweeter's camp
};

struct SyntheticData {
  Corpus corpus;                         // originals labeled, retweets unlabeled
  EmbeddingTable embeddings;
  std::map<std::string, Stance> true_class;  // originals only, before label noise
};

// Per-class counts for `total` items proportional to `weights`, largest remainder.
std::array<std::size_t, kNumClasses> apportion(std::size_t total, const std::array<double, kNumClasses>& weights);

SyntheticData make_synthetic(const SyntheticOptions& options);

}  // namespace stance
