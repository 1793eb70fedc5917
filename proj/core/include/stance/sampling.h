#pragma once

#include <span>
#include <vector>

#include "stance/rng.h"
#include "stance/types.h"

namespace stance {

// Indices into `labels` such that every class in play has as many entries as
// the largest one. All original indices appear once, in order, followed by
// extras drawn uniformly with replacement within each class (class order).
//
// Classes in play are those present in `labels`; any class listed in
// `required` must be present or InvalidArgument is thrown.
std::vector<std::size_t> upsample_indices(std::span<const Stance> labels, Rng& rng,
                                          std::span<const Stance> required = {});

template <typename T, typename LabelFn>
std::vector<T> upsample(const std::vector<T>& data, LabelFn label_of, Rng& rng,
                        std::span<const Stance> required = {}) {
  std::vector<Stance> labels;
  labels.reserve(data.size());
  for (const T& x : data) labels.push_back(label_of(x));
  std::vector<T> out;
  for (std::size_t i : upsample_indices(labels, rng, required)) out.push_back(data[i]);
  return out;
}

// Uniform draw over the three classes.
Stance random_predict(Rng& rng);

}  // namespace stance
