#include "stance/folds.h"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "stance/types.h"

namespace stance {
namespace {

std::vector<std::string> ids(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("id" + std::to_string(1000 + i));
  return out;
}

TEST(Folds, SizesForHundred) {
  auto v = ids(100);
  for (const auto& f : make_folds(v, 7)) {
    EXPECT_EQ(f.train_ids.size(), 60u);
    EXPECT_EQ(f.dev_ids.size(), 20u);
    EXPECT_EQ(f.test_ids.size(), 20u);
  }
}

TEST(Folds, RemainderGoesToTrain) {
  auto v = ids(103);
  FoldSplit f = make_fold(v, 7, 0);
  EXPECT_EQ(f.train_ids.size(), 63u);
  EXPECT_EQ(f.dev_ids.size(), 20u);
  EXPECT_EQ(f.test_ids.size(), 20u);
}

TEST(Folds, PartitionAndSorted) {
  auto v = ids(57);
  for (const auto& f : make_folds(v, 3, 10)) {
    std::set<std::string> all;
    for (const auto* part : {&f.train_ids, &f.dev_ids, &f.test_ids}) {
      EXPECT_TRUE(std::is_sorted(part->begin(), part->end()));
      all.insert(part->begin(), part->end());
    }
    EXPECT_EQ(all.size(), v.size());
    EXPECT_EQ(f.train_ids.size() + f.dev_ids.size() + f.test_ids.size(), v.size());
  }
}

TEST(Folds, DeterministicAndIndependentOfInputOrder) {
  auto v = ids(80);
  auto a = make_folds(v, 11);
  std::reverse(v.begin(), v.end());
  auto b = make_folds(v, 11);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].test_ids, b[i].test_ids);
    EXPECT_EQ(a[i].dev_ids, b[i].dev_ids);
    EXPECT_EQ(a[i].test_ids, make_fold(v, 11, static_cast<int>(i)).test_ids);
  }
  EXPECT_NE(a[0].test_ids, a[1].test_ids);
  EXPECT_NE(a[0].test_ids, make_fold(v, 12, 0).test_ids);
}

TEST(Folds, Errors) {
  auto few = ids(9);
  EXPECT_THROW(make_folds(few, 1), InvalidArgument);
  auto dup = ids(12);
  dup.push_back(dup.front());
  EXPECT_THROW(make_folds(dup, 1), InvalidArgument);
  auto ok = ids(10);
  EXPECT_THROW(make_folds(ok, 1, 0), InvalidArgument);
}

}  // namespace
}  // namespace stance
