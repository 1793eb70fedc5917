#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stance {

inline constexpr int kDefaultNumFolds = 10;

// One random train/dev/test split. Each id list is sorted.
struct FoldSplit {
  int fold_id = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> dev_ids;
  std::vector<std::string> test_ids;
};

// `num_folds` independent shuffles of `ids`, each cut 60/20/20. Dev and test
// get floor(20%) each and the remainder goes to train. Fold i draws from a
// stream derived from (seed, i), so folds can be regenerated individually.
std::vector<FoldSplit> make_folds(std::span<const std::string> ids, std::uint64_t seed,
                                  int num_folds = kDefaultNumFolds);

FoldSplit make_fold(std::span<const std::string> ids, std::uint64_t seed, int fold_id);

}  // namespace stance
