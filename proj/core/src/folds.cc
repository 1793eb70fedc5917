#include "stance/folds.h"

#include <algorithm>

#include "stance/rng.h"
#include "stance/types.h"

namespace stance {
namespace {

std::vector<std::string> sorted_unique(std::span<const std::string> ids) {
  std::vector<std::string> v(ids.begin(), ids.end());
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw InvalidArgument("make_folds: duplicate id");
  return v;
}

FoldSplit split_sorted(std::vector<std::string> pool, std::uint64_t seed, int fold_id) {
  if (pool.size() < 10) {
    throw InvalidArgument("make_folds: need at least 10 ids, got " + std::to_string(pool.size()));
  }
  Rng rng = Rng::derive(seed, "folds", static_cast<std::uint64_t>(fold_id));
  std::shuffle(pool.begin(), pool.end(), rng.engine());
  const std::size_t n = pool.size();
  const std::size_t n_dev = n / 5;
  const std::size_t n_test = n / 5;
  const std::size_t n_train = n - n_dev - n_test;
  FoldSplit f;
  f.fold_id = fold_id;
  auto it = pool.begin();
  f.train_ids.assign(it, it + static_cast<std::ptrdiff_t>(n_train));
  it += static_cast<std::ptrdiff_t>(n_train);
  f.dev_ids.assign(it, it + static_cast<std::ptrdiff_t>(n_dev));
  it += static_cast<std::ptrdiff_t>(n_dev);
  f.test_ids.assign(it, pool.end());
  std::sort(f.train_ids.begin(), f.train_ids.end());
  std::sort(f.dev_ids.begin(), f.dev_ids.end());
  std::sort(f.test_ids.begin(), f.test_ids.end());
  return f;
}

}  // namespace

FoldSplit make_fold(std::span<const std::string> ids, std::uint64_t seed, int fold_id) {
  return split_sorted(sorted_unique(ids), seed, fold_id);
}

std::vector<FoldSplit> make_folds(std::span<const std::string> ids, std::uint64_t seed, int num_folds) {
  if (num_folds <= 0) throw InvalidArgument("make_folds: num_folds must be positive");
  const auto pool = sorted_unique(ids);
  std::vector<FoldSplit> folds;
  folds.reserve(static_cast<std::size_t>(num_folds));
  for (int i = 0; i < num_folds; ++i) folds.push_back(split_sorted(pool, seed, i));
  return folds;
}

}  // namespace stance
