#include "stance/train_config.h"

#include <cmath>
#include <string>

namespace stance {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive, got " + std::to_string(learning_rate));
  }
  if (epochs < 0) throw InvalidArgument("epochs must be non-negative");
  if (batch_size <= 0) throw InvalidArgument("batch_size must be positive");
  if (!(l2 >= 0.0)) throw InvalidArgument("l2 must be non-negative");
}

}  // namespace stance
