#include "stance/sampling.h"

#include <algorithm>

namespace stance {

std::vector<std::size_t> upsample_indices(std::span<const Stance> labels, Rng& rng,
                                          std::span<const Stance> required) {
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[static_cast<std::size_t>(index_of(labels[i]))].push_back(i);
  }
  for (Stance s : required) {
    if (by_class[static_cast<std::size_t>(index_of(s))].empty()) {
      throw InvalidArgument("upsample: class '" + std::string(to_string(s)) + "' has no examples");
    }
  }
  if (labels.empty()) throw InvalidArgument("upsample: no examples");
  std::size_t largest = 0;
  for (const auto& members : by_class) largest = std::max(largest, members.size());

  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = i;
  for (const auto& members : by_class) {
    if (members.empty()) continue;
    for (std::size_t k = members.size(); k < largest; ++k) {
      out.push_back(members[rng.uniform_index(members.size())]);
    }
  }
  return out;
}

Stance random_predict(Rng& rng) { return stance_at(static_cast<int>(rng.uniform_index(kNumClasses))); }

}  // namespace stance
