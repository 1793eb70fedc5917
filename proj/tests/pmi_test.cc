#include "stance/pmi.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "stance/rng.h"
#include "support/oracles.h"

namespace stance {
namespace {

using Tags = std::vector<std::string>;
constexpr Stance R = Stance::kProRussian;
constexpr Stance U = Stance::kProUkrainian;
constexpr Stance N = Stance::kNeutral;

std::vector<HashtagExample> four_tweets(bool with_m) {
  Tags a{"a"}, b{"b"};
  if (with_m) {
    a.push_back("m");
    b.push_back("m");
  }
  return {{a, R}, {a, R}, {b, U}, {b, U}};
}

TEST(Pmi, HandCountedTable) {
  auto data = four_tweets(false);
  PmiTable t = compute_pmi(data);
  EXPECT_NEAR(t.score("a", R), std::log(2.0), 1e-12);
  EXPECT_EQ(t.score("b", R), kPmiUnseen);
  EXPECT_EQ(t.score("a", N), kPmiUnseen);
  EXPECT_EQ(t.score("zzz", R), kPmiUnseen);
}

TEST(Pmi, IndependentHashtagScoresZero) {
  auto data = four_tweets(true);
  PmiTable t = compute_pmi(data);
  EXPECT_NEAR(t.score("m", R), 0.0, 1e-12);
  EXPECT_NEAR(t.score("m", U), 0.0, 1e-12);
}

TEST(Pmi, RepeatedHashtagCountsOnce) {
  std::vector<HashtagExample> once{{{"a"}, R}, {{"b"}, U}};
  std::vector<HashtagExample> twice{{{"a", "a"}, R}, {{"b"}, U}};
  EXPECT_EQ(compute_pmi(once), compute_pmi(twice));
}

TEST(HashtagPredict, UniqueFiniteScoreWins) {
  auto data = four_tweets(false);
  PmiTable t = compute_pmi(data);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(hashtag_predict(t, Tags{"a"}, rng), R);
}

TEST(HashtagPredict, NoHashtagsIsUniform) {
  PmiTable t = compute_pmi(four_tweets(false));
  Rng rng(42);
  std::array<int, 3> counts{};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[index_of(hashtag_predict(t, Tags{}, rng))];
  for (int c : counts) {
    EXPECT_GE(c / double(draws), 0.32);
    EXPECT_LE(c / double(draws), 0.35);
  }
  // Unknown hashtags behave the same way.
  counts = {};
  for (int i = 0; i < draws; ++i) ++counts[index_of(hashtag_predict(t, Tags{"nope"}, rng))];
  for (int c : counts) EXPECT_GE(c / double(draws), 0.32);
}

TEST(HashtagPredict, TieIsRandomAmongTiedClasses) {
  PmiTable t = compute_pmi(four_tweets(false));
  ASSERT_EQ(t.score("a", R), t.score("b", U));
  Rng rng(3);
  std::array<int, 3> counts{};
  for (int i = 0; i < 4000; ++i) ++counts[index_of(hashtag_predict(t, Tags{"a", "b"}, rng))];
  EXPECT_EQ(counts[index_of(N)], 0);
  EXPECT_GT(counts[index_of(R)], 1800);
  EXPECT_GT(counts[index_of(U)], 1800);
}

TEST(PmiProperty, MatchesDirectFormula) {
  std::mt19937_64 gen(8);
  const Tags vocab{"a", "b", "c", "d", "e"};
  for (int round = 0; round < 100; ++round) {
    std::vector<HashtagExample> data;
    std::vector<std::pair<std::set<std::string>, int>> plain;
    for (int i = 0, n = 1 + static_cast<int>(gen() % 40); i < n; ++i) {
      HashtagExample ex;
      for (const auto& h : vocab) {
        if (gen() % 3 == 0) ex.hashtags.push_back(h);
      }
      ex.stance = stance_at(static_cast<int>(gen() % 3));
      plain.push_back({{ex.hashtags.begin(), ex.hashtags.end()}, index_of(ex.stance)});
      data.push_back(ex);
    }
    PmiTable t = compute_pmi(data);
    for (const auto& h : vocab) {
      for (int c = 0; c < 3; ++c) {
        double want = oracle::pmi(plain, h, c);
        double got = t.score(h, stance_at(c));
        if (std::isinf(want)) {
          EXPECT_EQ(got, kPmiUnseen);
        } else {
          EXPECT_NEAR(got, want, 1e-12);
        }
      }
    }
  }
}

TEST(PmiProperty, DuplicatingCorpusLeavesScoresUnchanged) {
  std::mt19937_64 gen(10);
  for (int round = 0; round < 50; ++round) {
    std::vector<HashtagExample> data;
    for (int i = 0, n = 1 + static_cast<int>(gen() % 20); i < n; ++i) {
      data.push_back({{std::string(1, static_cast<char>('a' + gen() % 4))}, stance_at(static_cast<int>(gen() % 3))});
    }
    PmiTable base = compute_pmi(data);
    for (int k = 2; k <= 4; ++k) {
      std::vector<HashtagExample> scaled;
      for (int r = 0; r < k; ++r) scaled.insert(scaled.end(), data.begin(), data.end());
      PmiTable t = compute_pmi(scaled);
      for (const auto& [h, scores] : base.entries()) {
        for (int c = 0; c < 3; ++c) {
          if (std::isinf(scores[c])) {
            EXPECT_EQ(t.scores(h)[c], scores[c]);
          } else {
            EXPECT_NEAR(t.scores(h)[c], scores[c], 1e-12);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace stance
