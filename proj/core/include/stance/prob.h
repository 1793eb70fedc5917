#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

#include "stance/types.h"

namespace stance {

// Probability distribution over the three stance classes.
struct ProbDist {
  std::array<double, kNumClasses> probs{1.0 / 3, 1.0 / 3, 1.0 / 3};

  double operator[](Stance s) const { return probs[static_cast<std::size_t>(index_of(s))]; }
  // Lowest class index wins ties.
  Stance argmax() const;

  static ProbDist one_hot(Stance s);
  static ProbDist uniform() { return {}; }

  friend bool operator==(const ProbDist&, const ProbDist&) = default;
};

// Numerically stable softmax (max-shifted) over three logits.
ProbDist softmax(const Eigen::Vector3d& logits);

}  // namespace stance
