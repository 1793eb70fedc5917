#pragma once

#include <array>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stance/rng.h"
#include "stance/types.h"

namespace stance {

// Score stored for (hashtag, class) pairs that never co-occur.
inline constexpr double kPmiUnseen = -std::numeric_limits<double>::infinity();

struct HashtagExample {
  std::vector<std::string> hashtags;  // duplicates count once
  Stance stance = Stance::kNeutral;
};

// Pointwise mutual information between hashtags and classes, with tweet-level
// probabilities: pmi(h, c) = log(p(h, c) / (p(h) p(c))).
class PmiTable {
 public:
  using Scores = std::array<double, kNumClasses>;

  PmiTable() = default;

  // kPmiUnseen for every class if the hashtag was never observed.
  Scores scores(const std::string& hashtag) const;
  double score(const std::string& hashtag, Stance s) const;
  const std::map<std::string, Scores>& entries() const { return scores_; }
  void set(std::string hashtag, Scores s) { scores_[std::move(hashtag)] = s; }

  friend bool operator==(const PmiTable&, const PmiTable&) = default;

 private:
  std::map<std::string, Scores> scores_;
};

PmiTable compute_pmi(std::span<const HashtagExample> labeled);

// Class with the highest per-class maximum PMI over the tweet's hashtags.
// No usable hashtag: uniform over all classes. Tie: uniform over the tied classes.
Stance hashtag_predict(const PmiTable& table, std::span<const std::string> hashtags, Rng& rng);

}  // namespace stance
