#include "stance/prob.h"

#include <cmath>

namespace stance {

Stance ProbDist::argmax() const {
  int best = 0;
  for (int i = 1; i < kNumClasses; ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return stance_at(best);
}

ProbDist ProbDist::one_hot(Stance s) {
  ProbDist d;
  d.probs = {0.0, 0.0, 0.0};
  d.probs[static_cast<std::size_t>(index_of(s))] = 1.0;
  return d;
}

ProbDist softmax(const Eigen::Vector3d& logits) {
  const double shift = logits.maxCoeff();
  std::array<double, kNumClasses> e{};
  double total = 0.0;
  for (int i = 0; i < kNumClasses; ++i) {
    e[i] = std::exp(logits[i] - shift);
    total += e[i];
  }
  ProbDist d;
  for (int i = 0; i < kNumClasses; ++i) d.probs[i] = e[i] / total;
  return d;
}

}  // namespace stance
