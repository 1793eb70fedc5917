#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stance/types.h"

namespace stance {

// Mini-batch gradient descent settings.
struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 30;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double l2 = 1e-4;  // applied to weight matrices, not biases

  static TrainConfig logreg_defaults() { return {}; }
  static TrainConfig cnn_defaults() {
    TrainConfig c;
    c.learning_rate = 0.01;
    return c;
  }
  void validate() const;
};

// Mean training objective (cross-entropy + l2 penalty) after each epoch.
struct TrainLog {
  std::vector<double> epoch_loss;
  double final_loss() const { return epoch_loss.empty() ? 0.0 : epoch_loss.back(); }
};

// Thrown when the objective stops being finite.
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace stance
