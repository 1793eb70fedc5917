#include "stance/pmi.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace stance {

PmiTable::Scores PmiTable::scores(const std::string& hashtag) const {
  auto it = scores_.find(hashtag);
  if (it == scores_.end()) return {kPmiUnseen, kPmiUnseen, kPmiUnseen};
  return it->second;
}

double PmiTable::score(const std::string& hashtag, Stance s) const {
  return scores(hashtag)[static_cast<std::size_t>(index_of(s))];
}

PmiTable compute_pmi(std::span<const HashtagExample> labeled) {
  if (labeled.empty()) throw InvalidArgument("compute_pmi: no labeled tweets");
  std::array<double, kNumClasses> class_count{};
  std::map<std::string, std::array<double, kNumClasses>> joint;
  for (const auto& ex : labeled) {
    const auto c = static_cast<std::size_t>(index_of(ex.stance));
    class_count[c] += 1.0;
    std::set<std::string> unique(ex.hashtags.begin(), ex.hashtags.end());
    for (const auto& h : unique) joint[h][c] += 1.0;
  }
  const double n = static_cast<double>(labeled.size());
  PmiTable table;
  for (const auto& [hashtag, counts] : joint) {
    double tag_count = 0.0;
    for (double v : counts) tag_count += v;
    PmiTable::Scores s{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      // p(h,c) / (p(h) p(c)) = n(h,c) * N / (n(h) * n(c))
      s[c] = counts[c] > 0.0 ? std::log((counts[c] * n) / (tag_count * class_count[c])) : kPmiUnseen;
    }
    table.set(hashtag, s);
  }
  return table;
}

Stance hashtag_predict(const PmiTable& table, std::span<const std::string> hashtags, Rng& rng) {
  std::array<double, kNumClasses> best{kPmiUnseen, kPmiUnseen, kPmiUnseen};
  for (const auto& h : hashtags) {
    const auto s = table.scores(h);
    for (std::size_t c = 0; c < kNumClasses; ++c) best[c] = std::max(best[c], s[c]);
  }
  const double top = *std::max_element(best.begin(), best.end());
  if (top == kPmiUnseen) return stance_at(static_cast<int>(rng.uniform_index(kNumClasses)));
  std::vector<int> tied;
  for (int c = 0; c < kNumClasses; ++c) {
    if (best[static_cast<std::size_t>(c)] == top) tied.push_back(c);
  }
  if (tied.size() == 1) return stance_at(tied.front());
  return stance_at(tied[rng.uniform_index(tied.size())]);
}

}  // namespace stance
